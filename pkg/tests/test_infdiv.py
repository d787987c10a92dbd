import random
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from freechi import free_moments as FM
from freechi import infdiv as ID
from freechi import quadratic_forms as QF
from freechi.laws import CompoundPoisson, FreePoisson, Odd, Semicircle, symmetric_bernoulli_moments
from freechi.series import CumulantSeq


def test_levy_moments():
    assert ID.levy_moments(Semicircle(2).to_cumulants(6)).m == (2, 0, 0, 0, 0)
    assert ID.levy_moments(FreePoisson(3, 1).to_cumulants(4)).m == (3, 3, 3)
    with pytest.raises(ValueError):
        ID.levy_moments(CumulantSeq([1]))


def test_leading_minors_against_direct_determinant():
    rng = random.Random(0)
    for _ in range(20):
        m = [Fraction(rng.randint(-5, 5), rng.randint(1, 4)) for _ in range(rng.choice([1, 3, 5, 7]))]
        size = (len(m) + 1) // 2
        direct = [ID._det([[m[i + j] for j in range(k + 1)] for i in range(k + 1)]) for k in range(size)]
        assert ID.leading_minors(m) == direct


def test_leading_minors_zero_pivot():
    # m = (0, 1, 0): the 1x1 minor vanishes, the 2x2 one is -1
    assert ID.leading_minors([0, 1, 0]) == [0, -1]


def test_semicircle_and_free_poisson_pass():
    for law in (Semicircle(Fraction(3, 2)).to_cumulants(10), FreePoisson(2, Fraction(1, 3)).to_cumulants(10)):
        v = ID.hankel_necessary_check(law)
        assert v.fid_consistent and v.label == "consistent-with-FID-to-order-10"


@pytest.mark.parametrize("eps", [Fraction(1, 3), Fraction(-2, 7), Fraction(5)])
def test_odd_law_violates(eps):
    v = ID.hankel_necessary_check(Odd(1, {3: eps}).to_cumulants(6))
    assert not v.fid_consistent and v.label == "violates-FID"
    assert v.violating_minor == 1 and v.minor_value == -(eps**2)
    assert v.to_json() == {"fid_consistent": False, "order": 6, "violating_minor": 1}


@settings(max_examples=30, deadline=None)
@given(st.lists(st.fractions(min_value=-2, max_value=2, max_denominator=5), min_size=2, max_size=4),
       st.fractions(min_value=Fraction(1, 5), max_value=3, max_denominator=5))
def test_compound_poisson_is_consistent(atoms, lam):
    # any compound free Poisson law is FID; use an empirical jump law
    N = 8
    jumps = [sum(Fraction(a) ** j for a in atoms) / len(atoms) for j in range(1, N + 1)]
    assert ID.hankel_necessary_check(CompoundPoisson(lam, jumps).to_cumulants(N)).fid_consistent


def cp_bernoulli(lam, N):
    return CompoundPoisson(lam, symmetric_bernoulli_moments(N)).to_cumulants(N)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_witness_matches_quadratic_form_cumulants(n):
    rng = random.Random(n)
    r_max = 5 if n < 3 else 4
    law = cp_bernoulli(Fraction(rng.randint(1, 4), 2), 2 * r_max)
    A = [[Fraction(rng.randint(-2, 2), rng.randint(1, 2)) for _ in range(n)] for _ in range(n)]
    for i in range(n):
        for j in range(i):
            A[i][j] = A[j][i]
    w = ID.fid_witness_moments(A, law, r_max)
    for r in range(1, r_max + 1):
        assert w[r - 1] == QF.quad_cumulant_even_family(A, [law] * n, r)
    assert ID.hankel_necessary_check(CumulantSeq(w)).fid_consistent


def test_witness_rejects_bad_input():
    with pytest.raises(ValueError):
        ID.fid_witness_moments([[1]], CumulantSeq([1, 1, 0, 0]), 2)
    with pytest.raises(ValueError):
        ID.fid_witness_moments([[1]], Semicircle(1).to_cumulants(3), 2)


def test_commutator_passes_to_order_six():
    semi = Semicircle(1).to_cumulants(12)
    kc = FM.poly_cumulants(FM.commutator_poly(), semi, 6)
    assert kc[1] == 0 and kc[2] == 2
    assert ID.hankel_necessary_check(kc).fid_consistent


@pytest.mark.parametrize("n", [2, 3])
def test_sample_variance_of_fid_input(n):
    law = cp_bernoulli(Fraction(3, 2), 10)
    kc = CumulantSeq(QF.sample_variance_cumulant(law, n, r) for r in range(1, 6))
    assert ID.hankel_necessary_check(kc).fid_consistent
