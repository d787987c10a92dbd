"""Truncated cumulant and moment sequences and the univariate transforms.

Everything is exact (``Fraction``). A :class:`CumulantSeq` of order N holds
K_1..K_N; indexing is 1-based, so ``kc[2]`` is the variance.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Sequence

from . import kernels
from .errors import TruncationError
from .partitions import Partition, iter_nc, kreweras_left
from .rational import format_rational, parse_rational


class _Seq:
    __slots__ = ()
    values: tuple[Fraction, ...]

    @property
    def order(self) -> int:
        return len(self.values)

    def __getitem__(self, r: int) -> Fraction:
        if not isinstance(r, int) or r < 1:
            raise IndexError("sequence indices are 1-based")
        if r > len(self.values):
            raise TruncationError(f"order {r} requested from a sequence truncated at {len(self.values)}")
        return self.values[r - 1]

    def __iter__(self):
        return iter(self.values)

    def __len__(self):
        return len(self.values)


@dataclass(frozen=True)
class CumulantSeq(_Seq):
    """Free cumulants K_1..K_N of a law."""

    values: tuple[Fraction, ...]

    def __init__(self, values: Iterable):
        vals = tuple(parse_rational(v) for v in values)
        if not vals:
            raise ValueError("a cumulant sequence needs order >= 1")
        object.__setattr__(self, "values", vals)

    @property
    def k(self) -> tuple[Fraction, ...]:
        return self.values

    def is_even(self) -> bool:
        return all(v == 0 for v in self.values[0::2])

    def truncate(self, order: int) -> "CumulantSeq":
        if order > self.order:
            raise TruncationError(f"cannot extend order {self.order} to {order}")
        return CumulantSeq(self.values[:order])

    def to_json(self) -> dict:
        return {"order": self.order, "k": [format_rational(v) for v in self.values]}

    @classmethod
    def from_json(cls, data: dict) -> "CumulantSeq":
        vals = data["k"]
        if "order" in data and int(data["order"]) != len(vals):
            raise ValueError("order does not match the number of cumulants")
        return cls(vals)

    def __repr__(self):
        return f"CumulantSeq({[format_rational(v) for v in self.values]})"


@dataclass(frozen=True)
class MomentSeq(_Seq):
    """Moments m_1..m_N; m_0 = 1 is implicit."""

    values: tuple[Fraction, ...]

    def __init__(self, values: Iterable):
        vals = tuple(parse_rational(v) for v in values)
        if not vals:
            raise ValueError("a moment sequence needs order >= 1")
        object.__setattr__(self, "values", vals)

    @property
    def m(self) -> tuple[Fraction, ...]:
        return self.values

    def __repr__(self):
        return f"MomentSeq({[format_rational(v) for v in self.values]})"


def _power_coefficients(m: Sequence[Fraction], N: int) -> list[list[Fraction]]:
    """pw[s][t] = [z^t] (1 + m_1 z + m_2 z^2 + ...)^s for s, t <= N."""
    base = [Fraction(1)] + list(m[:N]) + [Fraction(0)] * (N - len(m))
    pw = [[Fraction(1)] + [Fraction(0)] * N]
    for _ in range(N):
        prev = pw[-1]
        pw.append([sum(prev[i] * base[t - i] for i in range(t + 1)) for t in range(N + 1)])
    return pw


def moments_from_cumulants(kc: CumulantSeq) -> MomentSeq:
    """m_r = sum over NC(r) of prod K_|B|.

    Evaluated through the block of 1: m_r = sum_s K_s [z^{r-s}] M(z)^s.
    """
    N = kc.order
    base = [Fraction(1)]
    # pw[s][t] = [z^t] M(z)^s, filled one column t at a time since it only needs m_1..m_t
    pw = [[Fraction(1)]] + [[Fraction(1)] for _ in range(N)]
    for r in range(1, N + 1):
        t = r - 1
        if t:
            pw[0].append(Fraction(0))
            for s in range(1, N + 1):
                pw[s].append(sum(pw[s - 1][i] * base[t - i] for i in range(t + 1)))
        base.append(sum(kc[s] * pw[s][r - s] for s in range(1, r + 1)))
    return MomentSeq(base[1:])


def cumulants_from_moments(ms: MomentSeq) -> CumulantSeq:
    """Inverse of :func:`moments_from_cumulants` (triangular solve)."""
    N = ms.order
    k: list[Fraction] = []
    pw = _power_coefficients(list(ms.values), N)
    for r in range(1, N + 1):
        k.append(ms[r] - sum(k[s - 1] * pw[s][r - s] for s in range(1, r)))
    return CumulantSeq(k)


def k_pi(kc: CumulantSeq, p: Partition) -> Fraction:
    out = Fraction(1)
    for b in p.blocks:
        out *= kc[len(b)]
    return out


def _same_order(a: CumulantSeq, b: CumulantSeq):
    if a.order != b.order:
        raise ValueError(f"order mismatch: {a.order} vs {b.order}")


def add_free(a: CumulantSeq, b: CumulantSeq) -> CumulantSeq:
    _same_order(a, b)
    return CumulantSeq(x + y for x, y in zip(a, b))


def scale(kc: CumulantSeq, c) -> CumulantSeq:
    """Cumulants of cX."""
    c = parse_rational(c)
    return CumulantSeq(c**r * v for r, v in enumerate(kc, start=1))


def dilate_even(kc: CumulantSeq, c_squared) -> CumulantSeq:
    """Cumulants of sqrt(c_squared)*X for an even law (stays rational)."""
    if not kc.is_even():
        raise ValueError("dilation by a square root needs an even law")
    c2 = parse_rational(c_squared)
    if c2 < 0:
        raise ValueError("c_squared must be nonnegative")
    return CumulantSeq(v if r % 2 else c2 ** (r // 2) * v for r, v in enumerate(kc, start=1))


def symmetrize_even(kc: CumulantSeq) -> CumulantSeq:
    return CumulantSeq(v if r % 2 == 0 else 0 for r, v in enumerate(kc, start=1))


def zeta_seq(N: int) -> CumulantSeq:
    return CumulantSeq([1] * N)


def compress(kc: CumulantSeq, t) -> CumulantSeq:
    """Cumulants of PXP in the corner algebra (normalised trace), tau(P) = t."""
    t = parse_rational(t)
    if not 0 < t <= 1:
        raise ValueError("compression parameter must lie in (0, 1]")
    return CumulantSeq(t ** (r - 1) * v for r, v in enumerate(kc, start=1))


def linear_form_cumulants(kc: CumulantSeq, coeffs: Sequence) -> CumulantSeq:
    """Cumulants of sum_i c_i X_i for free copies X_i of the law."""
    cs = [parse_rational(c) for c in coeffs]
    return CumulantSeq(sum(c**r for c in cs) * v for r, v in enumerate(kc, start=1))


@lru_cache(maxsize=None)
def nc_type_counts(n: int) -> tuple[tuple[tuple[int, ...], int], ...]:
    """(sorted block sizes, multiplicity) over NC(n)."""
    c = Counter()
    for labels in kernels.iter_nc_labels(n):
        c[tuple(sorted(Counter(labels).values()))] += 1
    return tuple(sorted(c.items()))


@lru_cache(maxsize=None)
def _kreweras_type_counts(n: int):
    return tuple(sorted(kernels.nc_kreweras_profile(n).items()))


def _prod(seq: CumulantSeq, sizes) -> Fraction:
    out = Fraction(1)
    for s in sizes:
        out *= seq[s]
    return out


def boxed_convolve(a: CumulantSeq, b: CumulantSeq, form: str = "right") -> CumulantSeq:
    """c_n = sum over NC(n) of a_pi b_{Krew_r pi}  (``form="left"``: a_{Krew_l pi} b_pi)."""
    _same_order(a, b)
    out = []
    for n in range(1, a.order + 1):
        if form == "right":
            total = sum(cnt * _prod(a, sa) * _prod(b, sk) for (sa, sk), cnt in _kreweras_type_counts(n))
        elif form == "left":
            total = Fraction(0)
            for p in iter_nc(n):
                total += _prod(a, kreweras_left(p).sizes()) * _prod(b, p.sizes())
        else:
            raise ValueError(f"unknown form {form!r}")
        out.append(Fraction(total))
    return CumulantSeq(out)


def mult_free_convolve(a: CumulantSeq, b: CumulantSeq) -> CumulantSeq:
    """Cumulants of XY for free X, Y."""
    return boxed_convolve(a, b)


def square_even(kc: CumulantSeq) -> CumulantSeq:
    """Cumulants of X^2 for even X: K_r(X^2) = sum over NC(r) of prod K_{2|B|}(X).

    Input of order 2N gives output of order N.
    """
    if not kc.is_even():
        raise ValueError("square_even needs an even law (odd cumulants zero)")
    if kc.order < 2:
        raise TruncationError("need at least K_2")
    alpha = CumulantSeq(kc[2 * j] for j in range(1, kc.order // 2 + 1))
    return CumulantSeq(moments_from_cumulants(alpha).values)
