"""Floating-point cross-checks: closed-form densities, quadrature moments, Cauchy series.

This is the only module that works in floats. Densities with square-root
edges are integrated in the angle variable x = c + R sin(theta), where
f(x) dx/dtheta is smooth (for Marchenko-Pastur even at the 1/sqrt(x) pole
when lambda = 1), so composite Simpson converges fast.
"""

from __future__ import annotations

import cmath
import io
import math
from dataclasses import dataclass, field

import numpy as np
from scipy.integrate import simpson

from .series import MomentSeq


def semicircle_density(x: float, sigma: float = 1.0) -> float:
    if sigma <= 0:
        raise ValueError("sigma must be > 0")
    s2 = sigma * sigma
    d = 4 * s2 - x * x
    return math.sqrt(d) / (2 * math.pi * s2) if d > 0 else 0.0


def mp_support(lam: float, alpha: float) -> tuple[float, float]:
    r = math.sqrt(lam)
    return alpha * (1 - r) ** 2, alpha * (1 + r) ** 2


def mp_atom(lam: float) -> float:
    """Mass of the atom at 0."""
    return max(0.0, 1.0 - lam)


def mp_density(x: float, lam: float, alpha: float) -> float:
    """Absolutely continuous part of the free Poisson law with rate lam, jump alpha."""
    if lam < 0 or alpha <= 0:
        raise ValueError("need lam >= 0 and alpha > 0")
    if x <= 0 or lam == 0:
        return 0.0
    d = 4 * lam * alpha * alpha - (x - alpha * (1 + lam)) ** 2
    return math.sqrt(d) / (2 * math.pi * alpha * x) if d > 0 else 0.0


@dataclass
class DensityTable:
    """Tabulated density on an increasing grid, with an optional atom.

    When built by the table constructors below, ``theta`` and ``weighted``
    hold the angle grid and f(x(theta)) x'(theta); quadrature uses them.
    """

    grid: np.ndarray
    values: np.ndarray
    atom: tuple[float, float] | None = None
    theta: np.ndarray | None = field(default=None, repr=False)
    weighted: np.ndarray | None = field(default=None, repr=False)

    def __post_init__(self):
        self.grid = np.asarray(self.grid, dtype=float)
        self.values = np.asarray(self.values, dtype=float)
        if self.grid.shape != self.values.shape or self.grid.ndim != 1:
            raise ValueError("grid and values must be 1-d of equal length")
        if np.any(np.diff(self.grid) <= 0):
            raise ValueError("grid must be strictly increasing")
        if np.any(self.values < 0) or not np.all(np.isfinite(self.values)):
            raise ValueError("density values must be finite and nonnegative")

    def to_csv(self) -> str:
        buf = io.StringIO()
        buf.write("x,f\n")
        for x, f in zip(self.grid, self.values):
            buf.write(f"{float(x)!r},{float(f)!r}\n")
        if self.atom is not None:
            buf.write(f"# atom,{float(self.atom[0])!r},{float(self.atom[1])!r}\n")
        return buf.getvalue()


def _angle_grid(points: int) -> np.ndarray:
    if points < 3:
        raise ValueError("need at least 3 points")
    if points % 2 == 0:
        points += 1  # Simpson wants an even number of intervals
    return np.linspace(-math.pi / 2, math.pi / 2, points)


def semicircle_table(sigma: float = 1.0, points: int = 20001) -> DensityTable:
    th = _angle_grid(points)
    x = 2 * sigma * np.sin(th)
    f = np.array([semicircle_density(v, sigma) for v in x])
    weighted = 2 * np.cos(th) ** 2 / math.pi
    return DensityTable(x, f, None, th, weighted)


def mp_table(lam: float, alpha: float, points: int = 20001) -> DensityTable:
    if lam <= 0 or alpha <= 0:
        raise ValueError("need lam > 0 and alpha > 0")
    th = _angle_grid(points)
    c, R = alpha * (1 + lam), 2 * alpha * math.sqrt(lam)
    x = c + R * np.sin(th)
    f = np.array([mp_density(v, lam, alpha) for v in x])
    # f dx/dtheta = R^2 cos^2 / (2 pi alpha x); at a vanishing edge x = 0, cos^2/x stays finite
    with np.errstate(divide="ignore", invalid="ignore"):
        weighted = np.where(x > 0, R * R * np.cos(th) ** 2 / (2 * math.pi * alpha * x), 0.0)
    if lam == 1:
        # x = 2 alpha (1 + sin), so R^2 cos^2/(2 pi alpha x) = (1 - sin)/pi
        weighted = (1 - np.sin(th)) / math.pi
    atom = (0.0, mp_atom(lam)) if lam < 1 else None
    return DensityTable(x, f, atom, th, weighted)


def density_moment_check(table: DensityTable, k: int) -> float:
    """Quadrature estimate of the k-th moment, atom included."""
    if table.theta is not None:
        val = simpson(table.grid**k * table.weighted, x=table.theta)
    else:
        val = simpson(table.grid**k * table.values, x=table.grid)
    if table.atom is not None:
        loc, mass = table.atom
        val += mass * loc**k
    return float(val)


def cauchy_series_eval(ms: MomentSeq, z: complex, terms: int) -> complex:
    """sum_{j=0}^{terms} m_j / z^{j+1}, with m_0 = 1."""
    if terms > ms.order:
        raise ValueError(f"terms={terms} exceeds the moment order {ms.order}")
    z = complex(z)
    total = 1 / z
    zp = z
    for j in range(1, terms + 1):
        zp *= z
        total += complex(float(ms[j])) / zp
    return total


def semicircle_cauchy(z: complex, sigma: float = 1.0) -> complex:
    """Closed form (z - sqrt(z - 2s) sqrt(z + 2s)) / (2 s^2); the product of roots picks the right branch.

    Evaluated as 2 / (z + w) to avoid cancellation for large |z|.
    """
    z = complex(z)
    s = sigma
    w = cmath.sqrt(z - 2 * s) * cmath.sqrt(z + 2 * s)
    return 2 / (z + w)
