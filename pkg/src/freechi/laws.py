"""Named laws, each compiled to a truncated free-cumulant sequence."""

from __future__ import annotations

import json
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Mapping, Sequence

from .rational import format_rational, parse_rational
from .series import CumulantSeq


def _nonneg(x, name):
    x = parse_rational(x)
    if x < 0:
        raise ValueError(f"{name} must be >= 0")
    return x


@dataclass(frozen=True)
class Semicircle:
    sigma2: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "sigma2", _nonneg(self.sigma2, "sigma2"))

    def to_cumulants(self, N: int) -> CumulantSeq:
        return CumulantSeq(self.sigma2 if r == 2 else 0 for r in range(1, N + 1))


@dataclass(frozen=True)
class FreePoisson:
    lam: Fraction = Fraction(1)
    alpha: Fraction = Fraction(1)

    def __post_init__(self):
        object.__setattr__(self, "lam", _nonneg(self.lam, "lambda"))
        object.__setattr__(self, "alpha", parse_rational(self.alpha))

    def to_cumulants(self, N: int) -> CumulantSeq:
        return CumulantSeq(self.alpha**r * self.lam for r in range(1, N + 1))


@dataclass(frozen=True)
class ChiSquare:
    """Free chi-square with n degrees of freedom, variance sigma2, noncentrality delta."""

    n: int
    sigma2: Fraction = Fraction(1)
    delta: Fraction = Fraction(0)

    def __post_init__(self):
        if not isinstance(self.n, int) or self.n < 1:
            raise ValueError("n must be a positive integer")
        s2 = parse_rational(self.sigma2)
        if s2 <= 0:
            raise ValueError("sigma2 must be > 0")
        object.__setattr__(self, "sigma2", s2)
        object.__setattr__(self, "delta", _nonneg(self.delta, "delta"))

    def to_cumulants(self, N: int) -> CumulantSeq:
        # K_r = n s^r + delta r (2s)^(r-1), s = sigma2. The noncentral part
        # scales with s: (sigma S + m)^2 = s (S + m/sigma)^2. At s = 1 this is
        # the familiar n + delta r 2^(r-1).
        s = self.sigma2
        return CumulantSeq(self.n * s**r + self.delta * r * (2 * s) ** (r - 1) for r in range(1, N + 1))


@dataclass(frozen=True)
class Odd:
    """K_2 > 0, prescribed odd cumulants, all even cumulants above K_2 zero."""

    k2: Fraction = Fraction(1)
    odd: Mapping[int, Fraction] = field(default_factory=dict)

    def __post_init__(self):
        k2 = parse_rational(self.k2)
        if k2 <= 0:
            raise ValueError("k2 must be > 0")
        odd = {}
        for r, v in dict(self.odd).items():
            r = int(r)
            if r < 1 or r % 2 == 0:
                raise ValueError(f"odd law: order {r} is not odd")
            odd[r] = parse_rational(v)
        object.__setattr__(self, "k2", k2)
        object.__setattr__(self, "odd", odd)

    def __hash__(self):
        return hash((self.k2, tuple(sorted(self.odd.items()))))

    def to_cumulants(self, N: int) -> CumulantSeq:
        return CumulantSeq(self.k2 if r == 2 else self.odd.get(r, 0) for r in range(1, N + 1))


@dataclass(frozen=True)
class CompoundPoisson:
    """K_r = lam * m_r(nu); the jump law nu is given by its moments m_1, m_2, ..."""

    lam: Fraction
    jump_moments: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "lam", _nonneg(self.lam, "lambda"))
        object.__setattr__(self, "jump_moments", tuple(parse_rational(m) for m in self.jump_moments))

    def to_cumulants(self, N: int) -> CumulantSeq:
        if len(self.jump_moments) < N:
            raise ValueError(f"need {N} jump moments, got {len(self.jump_moments)}")
        return CumulantSeq(self.lam * m for m in self.jump_moments[:N])


@dataclass(frozen=True)
class Custom:
    k: tuple[Fraction, ...]

    def __post_init__(self):
        object.__setattr__(self, "k", tuple(parse_rational(v) for v in self.k))

    def to_cumulants(self, N: int) -> CumulantSeq:
        return CumulantSeq(self.k).truncate(N)


LawSpec = Semicircle | FreePoisson | ChiSquare | Odd | CompoundPoisson | Custom


def to_cumulants(spec: LawSpec, N: int) -> CumulantSeq:
    if N < 1:
        raise ValueError("order must be >= 1")
    return spec.to_cumulants(N)


def point_mass_moments(a, N: int) -> tuple[Fraction, ...]:
    a = parse_rational(a)
    return tuple(a**j for j in range(1, N + 1))


def symmetric_bernoulli_moments(N: int) -> tuple[Fraction, ...]:
    """Moments of (delta_1 + delta_{-1})/2."""
    return tuple(Fraction(1 - j % 2) for j in range(1, N + 1))


def law_from_json(data) -> LawSpec:
    if isinstance(data, str):
        data = json.loads(data)
    kind = str(data.get("type", "")).lower().replace("-", "_")
    if kind == "semicircle":
        return Semicircle(data.get("sigma2", "1"))
    if kind in ("free_poisson", "freepoisson", "marchenko_pastur"):
        return FreePoisson(data.get("lambda", "1"), data.get("alpha", "1"))
    if kind in ("chi_square", "chisquare", "chi2"):
        n = data["n"]
        if isinstance(n, str):
            n = int(n)
        return ChiSquare(n, data.get("sigma2", "1"), data.get("delta", "0"))
    if kind == "odd":
        return Odd(data.get("k2", "1"), data.get("odd", {}))
    if kind in ("compound_poisson", "compoundpoisson"):
        lam = data.get("lambda", "1")
        if "jump_moments" in data:
            return CompoundPoisson(lam, data["jump_moments"])
        jump = data.get("jump", {})
        order = int(jump.get("order", data.get("order", 16)))
        if jump.get("type") == "point_mass":
            return CompoundPoisson(lam, point_mass_moments(jump.get("at", "1"), order))
        if jump.get("type") == "symmetric_bernoulli":
            return CompoundPoisson(lam, symmetric_bernoulli_moments(order))
        raise ValueError("compound_poisson needs jump_moments or a known jump type")
    if kind == "custom":
        return Custom(data["k"])
    raise ValueError(f"unknown law type {data.get('type')!r}")


def law_to_json(spec: LawSpec) -> dict:
    f = format_rational
    if isinstance(spec, Semicircle):
        return {"type": "semicircle", "sigma2": f(spec.sigma2)}
    if isinstance(spec, FreePoisson):
        return {"type": "free_poisson", "lambda": f(spec.lam), "alpha": f(spec.alpha)}
    if isinstance(spec, ChiSquare):
        return {"type": "chi_square", "n": spec.n, "sigma2": f(spec.sigma2), "delta": f(spec.delta)}
    if isinstance(spec, Odd):
        return {"type": "odd", "k2": f(spec.k2), "odd": {str(r): f(v) for r, v in sorted(spec.odd.items())}}
    if isinstance(spec, CompoundPoisson):
        return {"type": "compound_poisson", "lambda": f(spec.lam), "jump_moments": [f(m) for m in spec.jump_moments]}
    return {"type": "custom", "k": [f(v) for v in spec.k]}


def noncentral_chi_square_oracle(n: int, sigma2, shifts: Sequence, N: int) -> CumulantSeq:
    """Cumulants of sum_i (X_i + m_i)^2 for free semicircles X_i of variance sigma2.

    Evaluated by brute-force word expansion, so keep n and N small.
    """
    from .free_moments import PolySpec, poly_cumulants

    if len(shifts) != n:
        raise ValueError("need one shift per variable")
    ms = [parse_rational(m) for m in shifts]
    terms: dict[tuple[int, ...], Fraction] = {}
    for i, m in enumerate(ms, start=1):
        terms[(i, i)] = terms.get((i, i), 0) + 1
        if m:
            terms[(i,)] = terms.get((i,), 0) + 2 * m
            terms[()] = terms.get((), 0) + m * m
    P = PolySpec.real(n, terms)
    law = Semicircle(sigma2).to_cumulants(2 * N)
    return poly_cumulants(P, [law] * n, N)
