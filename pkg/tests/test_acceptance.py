"""Acceptance suite: one PASS/FAIL line per criterion.

Run with ``pytest tests/test_acceptance.py -v`` (the verdict lines are
printed live), or directly with ``python tests/test_acceptance.py``.
"""

import random
import sys
import time
from fractions import Fraction

import pytest

from freechi import analytic as AN
from freechi import free_moments as FM
from freechi import infdiv as ID
from freechi import partitions as P
from freechi import quadratic_forms as QF
from freechi.laws import ChiSquare, CompoundPoisson, FreePoisson, Odd, Semicircle, noncentral_chi_square_oracle, symmetric_bernoulli_moments
from freechi.series import CumulantSeq, add_free, moments_from_cumulants

from oracles import catalan, matrix_index_sum


def rat(rng, lo=-3, hi=3, nonzero=False):
    while True:
        x = Fraction(rng.randint(lo, hi), rng.randint(1, 4))
        if x or not nonzero:
            return x


def rand_even(rng, order):
    k = [Fraction(0)] * order
    for r in range(4, order + 1, 2):
        k[r - 1] = rat(rng)
    k[1] = Fraction(rng.randint(1, 4), rng.randint(1, 3))
    return CumulantSeq(k)


def rand_matrix(rng, n):
    return [[rat(rng) for _ in range(n)] for _ in range(n)]


def c1_semicircle_baseline():
    for n in (2, 3, 4):
        for s2 in (Fraction(1), Fraction(3, 2)):
            law = Semicircle(s2).to_cumulants(10)
            for r in range(1, 6):
                if QF.sample_variance_cumulant(law, n, r) != (n - 1) * s2**r:
                    return False
    return True


def c2_triple_agreement():
    rng = random.Random(2)
    for n in (2, 3):
        A = QF.centering_matrix(n)
        for _ in range(2):
            law = rand_even(rng, 8)
            brute = FM.poly_cumulants(FM.sample_variance_poly(n), law, 4)
            for r in range(1, 5):
                if not brute[r] == QF.quad_cumulant_iid(A, law, r) == QF.sample_variance_cumulant(law, n, r):
                    return False
    return True


def c3_odd_law_gives_chi_square():
    rng = random.Random(3)
    for n in (2, 3):
        law = Odd(1, {3: rat(rng, nonzero=True), 5: rat(rng, nonzero=True)}).to_cumulants(8)
        brute = FM.poly_cumulants(FM.sample_variance_poly(n), law, 4)
        if any(brute[r] != n - 1 for r in range(1, 5)):
            return False
    return True


def c4_nonodd_law_is_detected():
    c = Fraction(-3, 7)
    for n in (2, 3):
        k4 = CumulantSeq([0, 1, 0, c, 0, 0])
        k6 = CumulantSeq([0, 1, 0, 0, 0, c])
        b4 = FM.poly_cumulants(FM.sample_variance_poly(n), k4, 2)
        b6 = FM.poly_cumulants(FM.sample_variance_poly(n), k6, 3)
        if b4[2] - (n - 1) != Fraction((n - 1) ** 2, n) * c:
            return False
        if b6[3] - (n - 1) != Fraction((n - 1) ** 3, n**2) * c:
            return False
    return True


def c5_coefficients():
    for n in range(2, 5):
        for r in range(1, 5):
            if QF.coefficient_cn(P.pispecial(r), n) != n - 1:
                return False
            if QF.coefficient_cn(P.one(2 * r), n) != Fraction((n - 1) ** r, n ** (r - 1)):
                return False
    return True


def c6_chi_square():
    cases = [(1, [Fraction(1)]), (1, [Fraction(1, 2)]), (2, [Fraction(3, 5), Fraction(4, 5)]), (2, [Fraction(1), Fraction(-1)]), (2, [0, 0])]
    for n, shifts in cases:
        delta = sum(Fraction(m) ** 2 for m in shifts)
        oracle = noncentral_chi_square_oracle(n, 1, shifts, 3)
        if oracle != ChiSquare(n, 1, delta).to_cumulants(3):
            return False
        if any(oracle[r] != n + delta * r * 2 ** (r - 1) for r in range(1, 4)):
            return False
    for N in range(1, 9):
        a = ChiSquare(2, 1, Fraction(1, 3)).to_cumulants(N)
        b = ChiSquare(3, 1, Fraction(7, 2)).to_cumulants(N)
        if add_free(a, b) != ChiSquare(5, 1, Fraction(23, 6)).to_cumulants(N):
            return False
    return True


def _concatenated(p):
    blocks, start = [], 1
    for j in p.block_of(p.n):
        interval = list(range(start, j))
        sub = p.restrict(interval) if interval else P.Partition(0, ())
        blocks.extend([x + start for x in b] for b in P.kreweras_extended(sub).blocks)
        start = j + 1
    return P.Partition.from_blocks(blocks, n=p.n)


def c7_partition_layer():
    if [len(P.enumerate_nc(n)) for n in range(1, 11)] != [catalan(n) for n in range(1, 11)]:
        return False
    for n in range(1, 9):
        for p in P.enumerate_nc(n):
            r, l = P.kreweras_right(p), P.kreweras_left(p)
            if not len(r) == len(l) == n + 1 - len(p):
                return False
            if P.kreweras_right(l) != p or P.kreweras_left(r) != p:
                return False
            if n <= 7 and l != _concatenated(p):
                return False
    for r in range(1, 5):
        hits = 0
        for p in P.enumerate_nc_filtered(2 * r, "even"):
            joined = P.joins_to_one(p, P.onetwo(r))
            if joined != P.leq(P.pispecial(r), p):
                return False
            hits += joined
        if hits != catalan(r):
            return False
    for r in range(1, 6):
        pairs = [p for p in P.enumerate_nc_filtered(2 * r, "pair") if P.joins_to_one(p, P.onetwo(r))]
        if pairs != [P.pispecial(r)]:
            return False
    return True


def c8_diagonal_lemmas():
    rng = random.Random(8)
    for _ in range(20):
        n, r = rng.randint(1, 3), rng.randint(1, 4)
        As = [rand_matrix(rng, n) for _ in range(r + 1)]
        # part (i): sum_i E_i A_1 E_i ... A_r E_i = prod_k E_D(A_k)
        lhs = QF.nested_sum(P.one(r + 1), [QF.identity(n)] + As[:r] + [QF.identity(n)])
        diag = [Fraction(1)] * n
        for A in As[:r]:
            diag = [d * A[i][i] for i, d in enumerate(diag)]
        for i in range(n):
            for j in range(n):
                if lhs[i, j] != (diag[i] if i == j else 0):
                    return False
        # part (ii): the nested conditional expectation against the index sum
        for p in P.enumerate_nc(r):
            direct = matrix_index_sum(As[:r], p.labels(), tail=As[r])
            if QF.e_d_nested(p, As) != tuple(direct[i][i] for i in range(n)):
                return False
    return True


def c9_r_cyclicity():
    rng = random.Random(9)
    for n in (1, 2, 3):
        if not QF.r_cyclicity_check(rand_matrix(rng, n), rand_even(rng, 6), 3).ok:
            return False
    control = QF.r_cyclicity_check([[1, 1], [1, 1]], Odd(1, {3: Fraction(1, 2)}).to_cumulants(6), 3)
    return not control.ok and control.value != 0


def c10_compression():
    rng = random.Random(10)
    for n in (2, 3, 5):
        for _ in range(2):
            if not QF.compression_corollary_check(rand_even(rng, 10), n, 5):
                return False
    return True


def c11_fid_preservation():
    rng = random.Random(11)
    for n in (1, 2, 3):
        law = CompoundPoisson(Fraction(rng.randint(1, 5), 2), symmetric_bernoulli_moments(10)).to_cumulants(10)
        A = rand_matrix(rng, n)
        A = [[A[max(i, j)][min(i, j)] for j in range(n)] for i in range(n)]
        w = ID.fid_witness_moments(A, law, 5)
        if any(w[r - 1] != QF.quad_cumulant_even_family(A, [law] * n, r) for r in range(1, 6)):
            return False
        if not ID.hankel_necessary_check(CumulantSeq(w)).fid_consistent:
            return False
    comm = FM.poly_cumulants(FM.commutator_poly(), Semicircle(1).to_cumulants(12), 6)
    if not ID.hankel_necessary_check(comm).fid_consistent:
        return False
    eps = Fraction(2, 5)
    v = ID.hankel_necessary_check(Odd(1, {3: eps}).to_cumulants(6))
    return not v.fid_consistent and v.violating_minor == 1 and v.minor_value == -(eps**2)


def c12_analytic():
    tol = 1e-6
    semi = moments_from_cumulants(Semicircle(1).to_cumulants(8))
    tables = [(AN.semicircle_table(1.0), semi)]
    for lam, alpha in ((1, 1), (2, 0.5), (0.25, 2)):
        ms = moments_from_cumulants(FreePoisson(Fraction(lam), Fraction(alpha)).to_cumulants(8))
        tables.append((AN.mp_table(lam, alpha), ms))
    for table, ms in tables:
        if abs(AN.density_moment_check(table, 0) - 1) > tol:
            return False
        if any(abs(AN.density_moment_check(table, k) - float(ms[k])) > tol for k in range(1, 9)):
            return False
    ms = moments_from_cumulants(Semicircle(1).to_cumulants(40))
    for z in (3, -3, 3j, 3 + 3j, 5 - 1j, 10):
        exact = AN.semicircle_cauchy(z)
        if abs(AN.cauchy_series_eval(ms, z, 40) - exact) / abs(exact) > tol:
            return False
    return True


# (number, description, check, runtime limit in seconds or None)
CRITERIA = [
    (1, "semicircle baseline", c1_semicircle_baseline, 1.0),
    (2, "triple-method agreement", c2_triple_agreement, 60.0),
    (3, "odd law gives (n-1)", c3_odd_law_gives_chi_square, None),
    (4, "K4 / K6 shift at orders 2 and 3", c4_nonodd_law_is_detected, None),
    (5, "c_n coefficient values", c5_coefficients, None),
    (6, "chi-square model and semigroup", c6_chi_square, None),
    (7, "partition-layer suite", c7_partition_layer, 30.0),
    (8, "diagonal expectation lemmas", c8_diagonal_lemmas, None),
    (9, "R-cyclicity and negative control", c9_r_cyclicity, None),
    (10, "compression corollary", c10_compression, None),
    (11, "FID preservation and Hankel checks", c11_fid_preservation, None),
    (12, "analytic cross-checks", c12_analytic, None),
]


def evaluate(check, limit):
    t0 = time.perf_counter()
    ok = bool(check())
    dt = time.perf_counter() - t0
    within = limit is None or dt < limit
    return ok and within, ok, dt


def verdict_line(num, desc, passed, ok, dt, limit):
    note = f"{dt:.2f}s"
    if limit is not None:
        note += f" (limit {limit:g}s)"
    if ok and not passed:
        note += " TIME LIMIT EXCEEDED"
    return f"criterion {num:2d} {'PASS' if passed else 'FAIL'}  {desc}  [{note}]"


@pytest.mark.parametrize("num,desc,check,limit", CRITERIA, ids=[f"criterion_{c[0]:02d}" for c in CRITERIA])
def test_criterion(num, desc, check, limit, capsys):
    passed, ok, dt = evaluate(check, limit)
    with capsys.disabled():
        print("\n" + verdict_line(num, desc, passed, ok, dt, limit))
    assert passed


if __name__ == "__main__":
    failures = 0
    for num, desc, check, limit in CRITERIA:
        passed, ok, dt = evaluate(check, limit)
        failures += not passed
        print(verdict_line(num, desc, passed, ok, dt, limit))
    sys.exit(1 if failures else 0)
