"""Cumulants of quadratic forms sum_ij a_ij X_i X_j in free even variables.

Matrices are numpy object arrays of Fractions, so every product and trace is
exact. The workhorse is :func:`nested_sum`, the partition-restricted sum

    F(pi; A_1, ..., A_{m+1}) = sum_{ker i >= pi} A_1 E_{i_1} A_2 ... A_m E_{i_m} A_{m+1}

(E_i the diagonal matrix units), evaluated recursively through the block of
pi containing m. Because X_1..X_n are even, only the cyclic index patterns of
A o [X_i X_j] carry cumulants, and every formula below reduces to a sum over
NC(r) of a trace of F times prod_B K_{2|B|}.
"""

from __future__ import annotations

import csv
import io
import itertools
import json
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

import numpy as np

from . import kernels
from .free_moments import joint_moment, product_cumulant
from .partitions import Partition, collapse, iter_nc, is_even, leq, pispecial
from .rational import format_rational, parse_rational
from .series import CumulantSeq, compress, dilate_even, nc_type_counts, square_even, symmetrize_even


# ------------------------------------------------------------------ matrices


def as_matrix(A) -> np.ndarray:
    M = np.array([[parse_rational(x) for x in row] for row in A], dtype=object)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ValueError("matrix must be square")
    return M


def identity(n: int) -> np.ndarray:
    return as_matrix([[int(i == j) for j in range(n)] for i in range(n)])


def centering_matrix(n: int) -> np.ndarray:
    """I - J/n, the matrix of the sample variance Q_n."""
    return as_matrix([[Fraction(int(i == j)) - Fraction(1, n) for j in range(n)] for i in range(n)])


def diag_matrix(d: Sequence) -> np.ndarray:
    n = len(d)
    return as_matrix([[d[i] if i == j else 0 for j in range(n)] for i in range(n)])


def is_symmetric(A) -> bool:
    A = as_matrix(A)
    return bool((A == A.T).all())


def read_matrix(text: str) -> np.ndarray:
    """Parse a JSON array of arrays or CSV rows of "p/q" tokens."""
    s = text.strip()
    if s.startswith("["):
        return as_matrix(json.loads(s))
    rows = [r for r in csv.reader(io.StringIO(s)) if r and not r[0].lstrip().startswith("#")]
    return as_matrix([[x.strip() for x in r] for r in rows])


def matrix_to_csv(A) -> str:
    return "\n".join(",".join(format_rational(x) for x in row) for row in as_matrix(A)) + "\n"


def matrix_to_json(A) -> list:
    return [[format_rational(x) for x in row] for row in as_matrix(A)]


def _dims(As) -> int:
    Ms = [as_matrix(A) for A in As]
    n = Ms[0].shape[0]
    if any(M.shape != (n, n) for M in Ms):
        raise ValueError("all matrices must have the same dimension")
    return n


def _trace(M) -> Fraction:
    return Fraction(sum(M[i, i] for i in range(M.shape[0])))


# ------------------------------------------------------- E_D and nested sums


def e_d(A) -> tuple[Fraction, ...]:
    """Conditional expectation onto diagonal matrices: the diagonal of A."""
    A = as_matrix(A)
    return tuple(Fraction(A[i, i]) for i in range(A.shape[0]))


def nested_sum(p: Partition, As: Sequence) -> np.ndarray:
    """F(p; A_1..A_{m+1}) for p a noncrossing partition of m points (see module doc)."""
    Ms = [as_matrix(A) for A in As]
    if len(Ms) != p.n + 1:
        raise ValueError(f"need {p.n + 1} matrices for a partition of {p.n}")
    _dims(Ms)
    return _nested(tuple(p.labels()), Ms)


def _nested(labels: tuple, Ms: list) -> np.ndarray:
    m = len(labels)
    if m == 0:
        return Ms[0]
    last = labels[-1]
    js = [j + 1 for j, b in enumerate(labels) if b == last]
    # positions 1..j1-1 form the first segment; the rest sit between consecutive js
    first = _nested(labels[: js[0] - 1], Ms[: js[0]])
    d = np.ones(Ms[0].shape[0], dtype=object)
    for a, b in zip(js, js[1:]):
        seg = _nested(labels[a : b - 1], Ms[a:b])
        d = d * np.diag(seg)
    return first @ (d[:, None] * Ms[m])


def e_d_nested(p: Partition, As: Sequence) -> tuple[Fraction, ...]:
    """E_D of sum_{ker i >= p} A_1 E_{i_1} ... A_r E_{i_r} A_{r+1}, via the block recursion."""
    return e_d(nested_sum(p, As))


def trace_over_partition(As: Sequence, p: Partition) -> Fraction:
    """sum_{ker i >= p} a1_{i_r i_1} a2_{i_1 i_2} ... ar_{i_{r-1} i_r}."""
    if len(As) != p.n:
        raise ValueError("need one matrix per point")
    n = _dims(As)
    return _trace(nested_sum(p, list(As) + [identity(n)]))


# ---------------------------------------------------------------- cumulants


def _require_even(kc: CumulantSeq, r: int):
    if not kc.is_even():
        raise ValueError("law must be even (odd cumulants zero)")
    if kc.order < 2 * r:
        raise ValueError(f"law order {kc.order} < 2r = {2 * r}")


def _k_even(kc: CumulantSeq, labels) -> Fraction:
    out = Fraction(1)
    sizes: dict[int, int] = {}
    for b in labels:
        sizes[b] = sizes.get(b, 0) + 1
    for s in sizes.values():
        out *= kc[2 * s]
        if not out:
            break
    return out


def joint_quad_cumulant(As: Sequence, kc: CumulantSeq) -> Fraction:
    """K_r(T_1, ..., T_r), T_k = sum a^(k)_ij X_i X_j, X_i free copies of an even law."""
    r = len(As)
    _require_even(kc, r)
    n = _dims(As)
    tail = [as_matrix(A) for A in As] + [identity(n)]
    total = Fraction(0)
    for labels in kernels.iter_nc_labels(r):
        k = _k_even(kc, labels)
        if k:
            total += _trace(_nested(tuple(labels), tail)) * k
    return total


def quad_cumulant_iid(A, kc: CumulantSeq, r: int) -> Fraction:
    """K_r(T) for T = sum a_ij X_i X_j, identically distributed even X_i."""
    return joint_quad_cumulant([A] * r, kc)


def _cyclic_trace(A: np.ndarray, c: Sequence[int]) -> Fraction:
    r = len(c)
    out = Fraction(1)
    for k in range(r):
        out *= A[c[k - 1], c[k]]
        if not out:
            break
    return out


def quad_cumulant_even_family(A, laws: Sequence[CumulantSeq], r: int) -> Fraction:
    """K_r(T) for free even X_i with (possibly different) laws ``laws[i]``.

    Sum over sigma in NC(r) (the image of the even-partition interval) and over
    block labellings c: Tr(A E_{c_1} ... A E_{c_r}) * prod_B K_{2|B|}(law c_B).
    """
    A = as_matrix(A)
    n = A.shape[0]
    if len(laws) != n:
        raise ValueError("one law per variable")
    for law in laws:
        _require_even(law, r)
    total = Fraction(0)
    for labels in kernels.iter_nc_labels(r):
        nb = max(labels) + 1
        sizes = [labels.count(b) for b in range(nb)]
        for assign in itertools.product(range(n), repeat=nb):
            w = Fraction(1)
            for b in range(nb):
                w *= laws[assign[b]][2 * sizes[b]]
                if not w:
                    break
            if w:
                total += w * _cyclic_trace(A, [assign[b] for b in labels])
    return total


def sample_variance_cumulant(kc: CumulantSeq, n: int, r: int) -> Fraction:
    """K_r(Q_n) = n sum_{pi in NC(r)} (1 - 1/n)^{r+1-|pi|} prod K_{2|B|}; odd cumulants ignored."""
    if n < 2:
        raise ValueError("n >= 2")
    if kc.order < 2 * r:
        raise ValueError(f"law order {kc.order} < 2r = {2 * r}")
    q = 1 - Fraction(1, n)
    total = Fraction(0)
    for sizes, count in nc_type_counts(r):
        w = Fraction(count)
        for s in sizes:
            w *= kc[2 * s]
        total += w * q ** (r + 1 - len(sizes))
    return n * total


def coefficient_cn(pi_hat: Partition, n: int) -> Fraction:
    """Coefficient of K_{pi_hat} in K_r(Q_n), for even pi_hat >= pispecial(r)."""
    if pi_hat.n % 2 or not is_even(pi_hat) or not leq(pispecial(pi_hat.n // 2), pi_hat):
        raise ValueError("pi_hat must be an even partition above pispecial(r)")
    r = pi_hat.n // 2
    return trace_over_partition([centering_matrix(n)] * r, collapse(pi_hat))


def determining_series_coeffs(A, kc: CumulantSeq, r: int) -> dict[tuple[int, ...], Fraction]:
    """K_r(Z_{i_r i_1}, Z_{i_1 i_2}, ..., Z_{i_{r-1} i_r}) for Z = A o [X_i X_j], keyed by (i_1..i_r), 1-based."""
    _require_even(kc, r)
    A = as_matrix(A)
    n = A.shape[0]
    alpha = CumulantSeq(kc[2 * s] for s in range(1, r + 1))
    out = {}
    for c in itertools.product(range(n), repeat=r):
        tr = _cyclic_trace(A, c)
        out[tuple(x + 1 for x in c)] = tr * joint_moment([x + 1 for x in c], alpha) if tr else Fraction(0)
    return out


@dataclass(frozen=True)
class CyclicityReport:
    ok: bool
    violation: tuple | None = None
    value: Fraction | None = None


def _is_cyclic(pairs) -> bool:
    r = len(pairs)
    return all(pairs[k][1] == pairs[(k + 1) % r][0] for k in range(r))


def r_cyclicity_check(A, kc: CumulantSeq, r_max: int) -> CyclicityReport:
    """Check that every non-cyclic cumulant K_r(Z_{i_1 j_1}, ..., Z_{i_r j_r}) vanishes.

    Evaluated directly with the product formula, so it is meaningful for any
    law; for an even law it must pass.
    """
    A = as_matrix(A)
    n = A.shape[0]
    idx = [(i, j) for i in range(1, n + 1) for j in range(1, n + 1)]
    for r in range(1, r_max + 1):
        for pairs in itertools.product(idx, repeat=r):
            if _is_cyclic(pairs):
                continue
            coeff = Fraction(1)
            for i, j in pairs:
                coeff *= A[i - 1, j - 1]
            if not coeff:
                continue
            val = coeff * product_cumulant([list(p) for p in pairs], kc)
            if val:
                return CyclicityReport(False, pairs, val)
    return CyclicityReport(True)


def opvalued_cumulant(As: Sequence, Lambdas: Sequence[Sequence], kc: CumulantSeq) -> tuple[Fraction, ...]:
    """Diagonal of K^D_r(A_1 o X Lambda_1, ..., A_{r-1} o X Lambda_{r-1}, A_r o X)."""
    r = len(As)
    if len(Lambdas) != r - 1:
        raise ValueError("need r-1 diagonal matrices")
    _require_even(kc, r)
    n = _dims(As)
    Ms = [as_matrix(A) for A in As]
    for k, lam in enumerate(Lambdas):
        if len(lam) != n:
            raise ValueError("diagonal length mismatch")
        Ms[k] = Ms[k] @ diag_matrix(lam)
    Ms.append(identity(n))
    total = np.zeros(n, dtype=object)
    for labels in kernels.iter_nc_labels(r):
        k = _k_even(kc, labels)
        if k:
            total = total + np.diag(_nested(tuple(labels), Ms)) * k
    return tuple(Fraction(x) for x in total)


def compressed_square_law(kc: CumulantSeq, n: int) -> CumulantSeq:
    """Cumulants of Z^2, Z = sqrt(n/(n-1)) P X~ P with tau(P) = (n-1)/n and X~ the symmetrization."""
    t = Fraction(n - 1, n)
    z = dilate_even(compress(symmetrize_even(kc), t), 1 / t)
    return square_even(z)


def compression_corollary_check(kc: CumulantSeq, n: int, r_max: int) -> bool:
    """K_r(Q_n) == (n-1) K_r(Z^2) for r <= r_max."""
    z2 = compressed_square_law(kc.truncate(2 * r_max), n)
    return all(sample_variance_cumulant(kc, n, r) == (n - 1) * z2[r] for r in range(1, r_max + 1))
