"""Desk checks for free infinite divisibility.

A freely infinitely divisible law has K_{j+2} = integral of x^j against a
finite positive measure, so the shifted cumulants must form a Hamburger
moment sequence. Positivity of the Hankel minors is necessary only: a pass
means "consistent to this order", a failure is definitive.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import lcm
from typing import Sequence

from .free_moments import joint_moment
from .quadratic_forms import _cyclic_trace, as_matrix
from .series import CumulantSeq


@dataclass(frozen=True)
class LevySeq:
    """Moments m_0..m_{N-2} of the Levy measure, m_j = K_{j+2}."""

    m: tuple[Fraction, ...]


@dataclass(frozen=True)
class FidVerdict:
    fid_consistent: bool
    order: int
    violating_minor: int | None = None
    minor_value: Fraction | None = None

    def to_json(self) -> dict:
        return {"fid_consistent": self.fid_consistent, "order": self.order, "violating_minor": self.violating_minor}

    @property
    def label(self) -> str:
        return f"consistent-with-FID-to-order-{self.order}" if self.fid_consistent else "violates-FID"


def levy_moments(kc: CumulantSeq) -> LevySeq:
    if kc.order < 2:
        raise ValueError("need cumulants up to order 2 at least")
    return LevySeq(tuple(kc.values[1:]))


def leading_minors(m: Sequence[Fraction]) -> list[Fraction]:
    """Leading principal minors det[m_{i+j}]_{0<=i,j<=k} for every k with 2k <= len(m)-1.

    Fraction-free (Bareiss) elimination on the integer matrix obtained by
    clearing denominators; each minor is rescaled back exactly.
    """
    m = [Fraction(x) for x in m]
    size = (len(m) + 1) // 2
    if size == 0:
        return []
    D = lcm(*(x.denominator for x in m)) if m else 1
    M = [[(m[i + j] * D).numerator for j in range(size)] for i in range(size)]
    minors = []
    prev = 1
    k = 0
    # Bareiss with a pivot at position k; a zero pivot breaks the leading-minor
    # recursion, so fall back to a direct determinant for the remaining minors.
    while k < size:
        piv = M[k][k]
        minors.append(Fraction(piv, D ** (k + 1)))
        if piv == 0:
            break
        for i in range(k + 1, size):
            for j in range(k + 1, size):
                M[i][j] = (M[i][j] * piv - M[i][k] * M[k][j]) // prev
        prev = piv
        k += 1
    for kk in range(len(minors), size):
        minors.append(_det([[m[i + j] for j in range(kk + 1)] for i in range(kk + 1)]))
    return minors


def _det(M: list[list[Fraction]]) -> Fraction:
    """Exact determinant by Gaussian elimination with row swaps."""
    M = [row[:] for row in M]
    n = len(M)
    det = Fraction(1)
    for c in range(n):
        p = next((r for r in range(c, n) if M[r][c] != 0), None)
        if p is None:
            return Fraction(0)
        if p != c:
            M[c], M[p] = M[p], M[c]
            det = -det
        det *= M[c][c]
        for r in range(c + 1, n):
            f = M[r][c] / M[c][c]
            if f:
                for j in range(c, n):
                    M[r][j] -= f * M[c][j]
    return det


def hankel_necessary_check(ls: LevySeq | CumulantSeq) -> FidVerdict:
    """Check that all leading Hankel minors of the Levy moments are >= 0.

    ``violating_minor`` is k for the first (k+1)x(k+1) minor that is negative.
    """
    if isinstance(ls, CumulantSeq):
        ls = levy_moments(ls)
    order = len(ls.m) + 1
    for k, d in enumerate(leading_minors(ls.m)):
        if d < 0:
            return FidVerdict(False, order, k, d)
    return FidVerdict(True, order)


def fid_witness_moments(A, kc: CumulantSeq, r_max: int) -> list[Fraction]:
    """n (Tr_n x tau)[(sum_i A E_i x Y_i)^r], r = 1..r_max, with K_r(Y) = K_{2r}(X).

    Expanded over index words: sum_i Tr(A E_{i_1} ... A E_{i_r}) tau(Y_{i_1} ... Y_{i_r}).
    """
    if not kc.is_even():
        raise ValueError("law must be even")
    if kc.order < 2 * r_max:
        raise ValueError(f"law order {kc.order} < {2 * r_max}")
    A = as_matrix(A)
    n = A.shape[0]
    y = CumulantSeq(kc[2 * s] for s in range(1, r_max + 1))
    out = []
    for r in range(1, r_max + 1):
        total = Fraction(0)
        for c in itertools.product(range(n), repeat=r):
            tr = _cyclic_trace(A, c)
            if tr:
                total += tr * joint_moment([x + 1 for x in c], y)
        out.append(total)
    return out
