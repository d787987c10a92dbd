import itertools
import random
from fractions import Fraction

import numpy as np
import pytest

from freechi import free_moments as FM
from freechi import quadratic_forms as QF
from freechi.laws import Odd, Semicircle
from freechi.partitions import Partition, blow_up, enumerate_nc, one, onetwo, pispecial, zero
from freechi.series import CumulantSeq, square_even

from oracles import matrix_index_sum


def rand_matrix(rng, n, symmetric=False):
    A = [[Fraction(rng.randint(-3, 3), rng.randint(1, 3)) for _ in range(n)] for _ in range(n)]
    if symmetric:
        for i in range(n):
            for j in range(i):
                A[i][j] = A[j][i]
    return A


def rand_even(rng, order=8):
    k = [Fraction(0)] * order
    for r in range(2, order + 1, 2):
        k[r - 1] = Fraction(rng.randint(-3, 3), rng.randint(1, 3))
    k[1] = Fraction(rng.randint(1, 3), rng.randint(1, 2))
    return CumulantSeq(k)


def tolist(M):
    return [[Fraction(x) for x in row] for row in np.asarray(M)]


def test_e_d_examples():
    assert QF.e_d(QF.identity(3)) == (1, 1, 1)
    assert QF.e_d(QF.centering_matrix(4)) == (Fraction(3, 4),) * 4
    assert QF.e_d([[0, 2], [5, 0]]) == (0, 0)


def test_trace_over_partition_examples():
    A = QF.centering_matrix(2)
    assert QF.trace_over_partition([A, A], one(2)) == Fraction(1, 2)
    rng = random.Random(1)
    B = QF.as_matrix(rand_matrix(rng, 3))
    assert QF.trace_over_partition([B] * 3, zero(3)) == np.trace(B @ B @ B)
    assert QF.trace_over_partition([B], one(1)) == np.trace(B)
    with pytest.raises(ValueError):
        QF.trace_over_partition([B, QF.identity(2)], one(2))


@pytest.mark.parametrize("r", range(1, 5))
def test_trace_over_partition_matches_index_sum(r):
    rng = random.Random(r)
    for n in (1, 2, 3):
        As = [rand_matrix(rng, n) for _ in range(r)]
        for p in enumerate_nc(r):
            direct = matrix_index_sum(As, p.labels())
            assert QF.trace_over_partition(As, p) == sum(direct[i][i] for i in range(n))


@pytest.mark.parametrize("r", range(1, 5))
def test_diagonal_sandwich_lemma(r):
    rng = random.Random(10 + r)
    for n in (1, 2, 3, 4):
        As = [rand_matrix(rng, n) for _ in range(r)]
        got = QF.nested_sum(one(r + 1), [QF.identity(n)] + As + [QF.identity(n)])
        expected = [Fraction(1)] * n
        for A in As:
            expected = [e * A[i][i] for i, e in enumerate(expected)]
        assert tolist(got) == tolist(QF.diag_matrix(expected))


@pytest.mark.parametrize("r", range(1, 5))
def test_nested_form_matches_index_sum(r):
    rng = random.Random(20 + r)
    for n in (1, 2, 3):
        As = [rand_matrix(rng, n) for _ in range(r + 1)]
        for p in enumerate_nc(r):
            direct = matrix_index_sum(As[:-1], p.labels(), tail=As[-1])
            assert QF.e_d_nested(p, As) == tuple(direct[i][i] for i in range(n))
            assert tolist(QF.nested_sum(p, As)) == direct


def test_nested_identity_is_all_ones():
    for p in enumerate_nc(4):
        assert QF.e_d_nested(p, [QF.identity(3)] * 5) == (1, 1, 1)


def test_even_family_single_variable_is_square():
    e = rand_even(random.Random(2))
    for r in range(1, 5):
        assert QF.quad_cumulant_even_family([[1]], [e], r) == square_even(e)[r]


@pytest.mark.parametrize("n", [2, 3, 4])
def test_sample_variance_semicircle(n):
    s2 = Fraction(3, 2)
    law = Semicircle(s2).to_cumulants(10)
    A = QF.centering_matrix(n)
    for r in range(1, 5):
        target = (n - 1) * s2**r
        assert QF.sample_variance_cumulant(law, n, r) == target
        assert QF.quad_cumulant_iid(A, law, r) == target
        assert QF.quad_cumulant_even_family(A, [law] * n, r) == target


@pytest.mark.parametrize("r", [1, 2, 3])
def test_even_family_matches_brute_force(r):
    rng = random.Random(30 + r)
    for _ in range(2):
        A = rand_matrix(rng, 2, symmetric=True)
        laws = [rand_even(rng, 6), rand_even(rng, 6)]
        brute = FM.poly_cumulants(FM.quadratic_form_poly(A), laws, r)
        assert QF.quad_cumulant_even_family(A, laws, r) == brute[r]


@pytest.mark.parametrize("n", [1, 2, 3])
def test_iid_formula_matches_even_family(n):
    rng = random.Random(40 + n)
    A = rand_matrix(rng, n)
    e = rand_even(rng)
    for r in range(1, 5):
        assert QF.quad_cumulant_iid(A, e, r) == QF.quad_cumulant_even_family(A, [e] * n, r)
    assert QF.quad_cumulant_iid(A, e, 1) == np.trace(QF.as_matrix(A)) * e[2]


def test_iid_requires_even_law():
    with pytest.raises(ValueError):
        QF.quad_cumulant_iid(QF.identity(2), CumulantSeq([1, 1, 0, 0]), 2)
    with pytest.raises(ValueError):
        QF.quad_cumulant_iid(QF.identity(2), CumulantSeq([0, 1]), 2)


@pytest.mark.parametrize("n", [2, 3])
def test_sample_variance_triple_agreement(n):
    rng = random.Random(50 + n)
    law = CumulantSeq([Fraction(1, 3), 1, Fraction(-1, 2), Fraction(2, 3), Fraction(3, 4), Fraction(-1, 5)])
    brute = FM.poly_cumulants(FM.sample_variance_poly(n), law, 3)
    from freechi.series import symmetrize_even

    A = QF.centering_matrix(n)
    for r in range(1, 4):
        assert brute[r] == QF.quad_cumulant_iid(A, symmetrize_even(law), r) == QF.sample_variance_cumulant(law, n, r)
    assert rng  # seeded for symmetry with the other tests


def test_sample_variance_examples():
    c = Fraction(5, 7)
    law = CumulantSeq([0, 1, 0, c, 0, 0])
    for n in (2, 3, 4):
        assert QF.sample_variance_cumulant(law, n, 2) == (n - 1) + Fraction((n - 1) ** 2, n) * c
    odd = Odd(1, {3: Fraction(1, 2), 5: Fraction(-3, 4)}).to_cumulants(10)
    for r in range(1, 6):
        assert QF.sample_variance_cumulant(odd, 3, r) == 2


def test_sixth_cumulant_shift():
    c = Fraction(-2, 3)
    law = CumulantSeq([0, 1, 0, 0, 0, c])
    for n in (2, 3, 5):
        assert QF.sample_variance_cumulant(law, n, 3) - (n - 1) == Fraction((n - 1) ** 3, n**2) * c


@pytest.mark.parametrize("n", [2, 3, 4])
def test_coefficient_cn_extremes(n):
    for r in range(1, 5):
        assert QF.coefficient_cn(pispecial(r), n) == n - 1
        assert QF.coefficient_cn(one(2 * r), n) == Fraction((n - 1) ** r, n ** (r - 1))


@pytest.mark.parametrize("n", [2, 3])
def test_coefficient_decomposition(n):
    rng = random.Random(60 + n)
    e = rand_even(rng)
    for r in range(1, 5):
        total = Fraction(0)
        for q in enumerate_nc(r):
            hat = blow_up(q)
            k = Fraction(1)
            for b in hat.blocks:
                k *= e[len(b)]
            total += QF.coefficient_cn(hat, n) * k
        assert total == QF.sample_variance_cumulant(e, n, r)


def test_coefficient_cn_rejects_outside_interval():
    with pytest.raises(ValueError):
        QF.coefficient_cn(onetwo(2), 3)
    with pytest.raises(ValueError):
        QF.coefficient_cn(Partition.parse("1,2,3|4"), 3)


def test_determining_series():
    rng = random.Random(70)
    e = rand_even(rng)
    for r in range(1, 4):
        assert QF.determining_series_coeffs([[1]], e, r) == {(1,) * r: square_even(e)[r]}
    A = rand_matrix(rng, 2, symmetric=True)
    for r in range(1, 4):
        coeffs = QF.determining_series_coeffs(A, e, r)
        assert sum(coeffs.values()) == QF.quad_cumulant_iid(A, e, r)
        for c, v in coeffs.items():
            groups = [(c[k - 1], c[k]) for k in range(r)]
            a = Fraction(1)
            for i, j in groups:
                a *= A[i - 1][j - 1]
            assert v == a * FM.product_cumulant(groups, e)


def test_determining_series_semicircle_identity():
    law = Semicircle(2).to_cumulants(6)
    coeffs = QF.determining_series_coeffs(QF.identity(2), law, 3)
    assert coeffs[(1, 1, 1)] == coeffs[(2, 2, 2)] == 8
    assert all(v == 0 for c, v in coeffs.items() if len(set(c)) > 1)


@pytest.mark.parametrize("n", [1, 2, 3])
def test_r_cyclicity_even_law(n):
    rng = random.Random(80 + n)
    rep = QF.r_cyclicity_check(rand_matrix(rng, n), rand_even(rng, 6), 3 if n < 3 else 2)
    assert rep.ok


def test_r_cyclicity_negative_control():
    eps = Fraction(1, 3)
    law = Odd(1, {3: eps}).to_cumulants(6)
    ones = [[1, 1], [1, 1]]
    rep = QF.r_cyclicity_check(ones, law, 3)
    assert not rep.ok and rep.value != 0
    assert FM.product_cumulant([(1, 1), (1, 2), (2, 2)], law) == eps**2


def test_joint_quad_cumulant():
    rng = random.Random(90)
    e = rand_even(rng)
    A = rand_matrix(rng, 2)
    assert QF.joint_quad_cumulant([A] * 3, e) == QF.quad_cumulant_iid(A, e, 3)
    assert QF.joint_quad_cumulant([A], e) == np.trace(QF.as_matrix(A)) * e[2]
    A1, A2 = rand_matrix(rng, 2, True), rand_matrix(rng, 2, True)
    brute = FM.poly_mixed_cumulant([FM.quadratic_form_poly(A1), FM.quadratic_form_poly(A2)], e)
    assert brute == QF.joint_quad_cumulant([A1, A2], e)


def opvalued_direct(As, lams, law):
    n, r = len(As[0]), len(As)
    out = [Fraction(0)] * n
    for idx in itertools.product(range(1, n + 1), repeat=r):
        coeff = Fraction(1)
        prev = idx[-1]
        for k in range(r):
            coeff *= As[k][prev - 1][idx[k] - 1]
            if k < r - 1:
                coeff *= lams[k][idx[k] - 1]
            prev = idx[k]
        if coeff:
            groups = [(idx[k - 1], idx[k]) for k in range(r)]
            out[idx[-1] - 1] += coeff * FM.product_cumulant(groups, law)
    return tuple(out)


@pytest.mark.parametrize("r", [1, 2, 3])
def test_opvalued_cumulant_matches_index_sum(r):
    rng = random.Random(100 + r)
    e = rand_even(rng)
    As = [rand_matrix(rng, 2) for _ in range(r)]
    lams = [[Fraction(rng.randint(-2, 2), rng.randint(1, 3)) for _ in range(2)] for _ in range(r - 1)]
    assert QF.opvalued_cumulant(As, lams, e) == opvalued_direct(As, lams, e)


def test_opvalued_specialisations():
    rng = random.Random(110)
    e = rand_even(rng)
    A = rand_matrix(rng, 3)
    assert QF.opvalued_cumulant([A], [], e) == tuple(x * e[2] for x in QF.e_d(A))
    As = [rand_matrix(rng, 3) for _ in range(3)]
    got = QF.opvalued_cumulant(As, [[1, 1, 1]] * 2, e)
    assert sum(got) == QF.joint_quad_cumulant(As, e)


@pytest.mark.parametrize("n", [2, 3, 5])
def test_compression_corollary(n):
    assert QF.compression_corollary_check(Semicircle(Fraction(2, 3)).to_cumulants(10), n, 5)
    assert QF.compression_corollary_check(rand_even(random.Random(n), 10), n, 5)
    assert QF.compression_corollary_check(CumulantSeq([1, 1, 2, 3, 0, 1, 1, 1, 0, 2]), n, 5)


def test_matrix_io_roundtrip():
    A = QF.as_matrix([["1/2", "-1"], ["0", "3"]])
    assert tolist(QF.read_matrix(QF.matrix_to_csv(A))) == tolist(A)
    import json

    assert tolist(QF.read_matrix(json.dumps(QF.matrix_to_json(A)))) == tolist(A)
    with pytest.raises(ValueError):
        QF.read_matrix("1,2\n3")
    assert QF.is_symmetric(QF.centering_matrix(3))
