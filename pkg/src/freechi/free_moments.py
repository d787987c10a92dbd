"""Brute-force moments and cumulants of polynomials in free variables.

A joint moment tau(X_{w1} ... X_{wL}) is the sum over noncrossing partitions
pi <= ker(w) of prod_B K_|B|(law of the letter on B); mixed cumulants of
distinct free variables vanish, which is exactly the ``pi <= ker`` filter.
This is the reference every closed formula in the package is checked against.

``laws`` arguments accept either one CumulantSeq (all variables identically
distributed) or a sequence indexed by variable (letter 1 uses ``laws[0]``).
"""

from __future__ import annotations

import json
from collections import Counter
from fractions import Fraction
from functools import lru_cache
from typing import Iterable, Mapping, Sequence

from . import kernels
from .errors import SizeLimitError, TruncationError
from .partitions import BlockSet
from .rational import Scalar, format_rational, parse_rational
from .series import CumulantSeq, MomentSeq, cumulants_from_moments

WORD_CAP = 12

Word = tuple[int, ...]


def _law(laws, letter: int) -> CumulantSeq:
    if isinstance(laws, CumulantSeq):
        return laws
    if letter < 1 or letter > len(laws):
        raise ValueError(f"no law given for variable {letter}")
    return laws[letter - 1]


def _canon(word: Sequence[int]) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """(colour tuple by first occurrence, letter of each colour)."""
    seen: dict[int, int] = {}
    colors = []
    for x in word:
        if x not in seen:
            seen[x] = len(seen)
        colors.append(seen[x])
    return tuple(colors), tuple(seen)


@lru_cache(maxsize=None)
def _profile(colors: tuple[int, ...], rho: tuple[int, ...] | None, forbidden: tuple[int, ...]):
    return tuple(kernels.colored_nc_profile(colors, rho, forbidden).items())


def _check_len(L: int):
    if L > WORD_CAP:
        raise SizeLimitError(f"word length {L} exceeds the cap of {WORD_CAP}")


def _evaluate(profile, claws: Sequence[CumulantSeq]) -> Fraction:
    total = Fraction(0)
    for key, count in profile:
        term = Fraction(count)
        for colour, size in key:
            law = claws[colour]
            if size > law.order:
                raise TruncationError(f"cumulant of order {size} needed, law has order {law.order}")
            term *= law[size]
            if not term:
                break
        total += term
    return total


@lru_cache(maxsize=200_000)
def _moment_cached(colors, claws) -> Fraction:
    return _evaluate(_profile(colors, None, ()), claws)


def joint_moment(word: Sequence[int], laws) -> Fraction:
    """tau(X_{w_1} X_{w_2} ... X_{w_L}) for free variables; exact rational."""
    word = tuple(int(x) for x in word)
    _check_len(len(word))
    if not word:
        return Fraction(1)
    colors, letters = _canon(word)
    return _moment_cached(colors, tuple(_law(laws, x) for x in letters))


def product_cumulant(groups: Sequence[Sequence[int]], laws, forbidden: BlockSet | Iterable = ()) -> Fraction:
    """K_m(X_{g_1}, ..., X_{g_m}) where each argument is the product of a group's letters.

    Sum over pi in NC(L), pi <= ker, whose NC-join with the interval
    partition of the group sizes is the one-block partition. ``forbidden``
    removes partitions containing any of the given position sets as a block.
    """
    groups = [tuple(int(x) for x in g) for g in groups]
    if any(not g for g in groups):
        raise ValueError("empty group")
    word = tuple(x for g in groups for x in g)
    _check_len(len(word))
    if isinstance(forbidden, BlockSet):
        if forbidden.n != len(word):
            raise ValueError("forbidden family lives on a different ground set")
        masks = forbidden.masks()
    else:
        masks = BlockSet(len(word), tuple(tuple(s) for s in forbidden)).masks()
    colors, letters = _canon(word)
    prof = _profile(colors, tuple(len(g) for g in groups), tuple(sorted(set(masks))))
    return _evaluate(prof, [_law(laws, x) for x in letters])


def filtered_product_cumulant(groups, laws, forbidden: BlockSet) -> Fraction:
    return product_cumulant(groups, laws, forbidden)


def covariance_centered(i: int, j: int, n: int, k2=1) -> Fraction:
    """K_2(X_i - mean, X_j - mean) for n free copies with variance k2."""
    if not (1 <= i <= n and 1 <= j <= n):
        raise ValueError("indices out of range")
    k2 = parse_rational(k2)
    return k2 * Fraction(n - 1, n) if i == j else -k2 / n


# ---------------------------------------------------------------- polynomials


class PolySpec:
    """Noncommutative polynomial: word -> complex rational coefficient."""

    __slots__ = ("n_vars", "terms")

    def __init__(self, n_vars: int, terms: Mapping[Sequence[int], object]):
        if n_vars < 1:
            raise ValueError("n_vars must be positive")
        clean: dict[Word, Scalar] = {}
        for w, c in terms.items():
            w = tuple(int(x) for x in w)
            if any(x < 1 or x > n_vars for x in w):
                raise ValueError(f"word {w} uses a variable outside 1..{n_vars}")
            c = Scalar.of(c if isinstance(c, Scalar) else parse_rational(c))
            c = clean.get(w, Scalar()) + c
            if c:
                clean[w] = c
            else:
                clean.pop(w, None)
        self.n_vars = n_vars
        self.terms = clean

    @classmethod
    def real(cls, n_vars: int, terms: Mapping[Sequence[int], object]) -> "PolySpec":
        return cls(n_vars, terms)

    def is_real(self) -> bool:
        return all(c.is_real() for c in self.terms.values())

    def degrees(self) -> set[int]:
        return {len(w) for w in self.terms}

    def __eq__(self, other):
        return isinstance(other, PolySpec) and self.n_vars == other.n_vars and self.terms == other.terms

    def __repr__(self):
        return f"PolySpec({self.n_vars}, {{{', '.join(f'{w}: {c}' for w, c in sorted(self.terms.items()))}}})"

    def to_json(self) -> dict:
        return {
            "n_vars": self.n_vars,
            "terms": [
                {"word": list(w), "re": format_rational(c.re), "im": format_rational(c.im)}
                for w, c in sorted(self.terms.items())
            ],
        }

    @classmethod
    def from_json(cls, data) -> "PolySpec":
        if isinstance(data, str):
            data = json.loads(data)
        terms: dict[Word, Scalar] = {}
        for t in data["terms"]:
            w = tuple(t["word"])
            c = Scalar(parse_rational(t.get("re", "0")), parse_rational(t.get("im", "0")))
            terms[w] = terms.get(w, Scalar()) + c
        return cls(int(data["n_vars"]), terms)


def _coeff_table(P: PolySpec) -> dict[Word, object]:
    # plain Fractions are much faster than Scalars, so use them when possible
    if P.is_real():
        return {w: c.re for w, c in P.terms.items()}
    return dict(P.terms)


def _multiply(a: dict, b: dict) -> dict:
    out: dict = {}
    for wa, ca in a.items():
        for wb, cb in b.items():
            w = wa + wb
            out[w] = out.get(w, 0) + ca * cb
    return {w: c for w, c in out.items() if c}


def _moment_of_table(table: dict, laws) -> Scalar:
    total = Scalar()
    for w, c in table.items():
        m = joint_moment(w, laws)
        if m:
            total = total + Scalar.of(c * m)
    return total


def poly_moment(P: PolySpec, laws) -> Scalar:
    return _moment_of_table(_coeff_table(P), laws)


def poly_power_moments(P: PolySpec, laws, r_max: int) -> list[Scalar]:
    """[tau(P), tau(P^2), ..., tau(P^r_max)]."""
    base = _coeff_table(P)
    cur = {(): Fraction(1)}
    out = []
    for _ in range(r_max):
        cur = _multiply(cur, base)
        out.append(_moment_of_table(cur, laws))
    return out


def poly_cumulants(P: PolySpec, laws, N: int) -> CumulantSeq:
    """Free cumulants K_1..K_N of the law of a self-adjoint polynomial."""
    ms = poly_power_moments(P, laws, N)
    for r, m in enumerate(ms, start=1):
        if not m.is_real():
            raise ValueError(f"tau(P^{r}) = {m} is not real; P is not self-adjoint")
    return cumulants_from_moments(MomentSeq(m.re for m in ms))


def poly_mixed_cumulant(polys: Sequence[PolySpec], laws, forbidden: BlockSet | Iterable = ()) -> Scalar:
    """K_m(P_1, ..., P_m) by multilinear expansion into product cumulants.

    With a forbidden family this is the partial cumulant functional; that
    needs every P_j homogeneous so that positions are well defined.
    """
    forbidden = tuple(forbidden.forbidden if isinstance(forbidden, BlockSet) else forbidden)
    if forbidden:
        for P in polys:
            if len(P.degrees()) > 1:
                raise ValueError("filtered cumulants need homogeneous polynomials")
    tables = [_coeff_table(P) for P in polys]
    total = Scalar()

    def rec(j, groups, coeff):
        nonlocal total
        if j == len(tables):
            if any(not g for g in groups):
                # a constant argument only survives in a first-order cumulant
                if len(groups) == 1:
                    total = total + Scalar.of(coeff)
                return
            L = sum(len(g) for g in groups)
            val = product_cumulant(groups, laws, BlockSet(L, forbidden) if forbidden else ())
            if val:
                total = total + Scalar.of(coeff * val)
            return
        for w, c in tables[j].items():
            rec(j + 1, groups + [w], coeff * c)

    rec(0, [], Fraction(1))
    return total


# ------------------------------------------------------------- builders


def sample_variance_poly(n: int) -> PolySpec:
    """Q_n = sum_i (X_i - mean)^2 = sum_i X_i^2 - (1/n) sum_{i,j} X_i X_j."""
    if n < 1:
        raise ValueError("n must be positive")
    terms = {}
    for i in range(1, n + 1):
        for j in range(1, n + 1):
            terms[(i, j)] = Fraction(int(i == j)) - Fraction(1, n)
    return PolySpec(n, terms)


def quadratic_form_poly(A) -> PolySpec:
    """sum_{i,j} a_ij X_i X_j for a square matrix of rationals."""
    n = len(A)
    return PolySpec(n, {(i + 1, j + 1): parse_rational(A[i][j]) for i in range(n) for j in range(n)})


def linear_poly(coeffs: Sequence) -> PolySpec:
    return PolySpec(len(coeffs), {(i + 1,): parse_rational(c) for i, c in enumerate(coeffs)})


def centered_linear(i: int, n: int) -> PolySpec:
    """X_i - mean."""
    return linear_poly([Fraction(int(j == i)) - Fraction(1, n) for j in range(1, n + 1)])


def commutator_poly() -> PolySpec:
    """i (X_1 X_2 - X_2 X_1)."""
    return PolySpec(2, {(1, 2): Scalar(Fraction(0), Fraction(1)), (2, 1): Scalar(Fraction(0), Fraction(-1))})


def clear_caches():
    _profile.cache_clear()
    _moment_cached.cache_clear()
