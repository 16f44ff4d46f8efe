"""Statistical scale selection and convergence diagnostics.

All rate formulas use the natural logarithm (the tail bounds they come from
are exponential in base e).
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .geometry import SampledSpace, hausdorff
from .invariants import pointwise_dimension_curve

__all__ = ["ABStandard", "delta_k", "s_k", "delta_hat", "DeltaPrimeRule",
           "delta_prime", "loglog_regression"]


@dataclass(frozen=True)
class ABStandard:
    """Parameters of an (a,b)-standard measure: every ball of radius r has
    mass at least min(1, a * r^b)."""

    a: float
    b: float

    def __post_init__(self):
        if self.a <= 0:
            raise ValueError("a must be > 0")
        if self.b < 1:
            raise ValueError("b must be >= 1")


def delta_k(k: int, ab: ABStandard) -> float:
    """Explicit scale rate 4 * (2 log(k) / (a k))^(1/b)."""
    if k < 2:
        raise ValueError("k must be >= 2")
    return 4.0 * (2.0 * math.log(k) / (ab.a * k)) ** (1.0 / ab.b)


def s_k(k: int, beta: float) -> int:
    """Subsample size ceil(k / log(k)^(1+beta)), clamped to [1, k]."""
    if k < 2:
        raise ValueError("k must be >= 2")
    if beta <= 0:
        raise ValueError("beta must be > 0")
    s = math.ceil(k / math.log(k) ** (1.0 + beta))
    return max(1, min(k, s))


def delta_hat(space: SampledSpace, beta: float = 1.0) -> float:
    """Subsampling scale estimate d_H(first s_k points, all k points).

    The sample order is meaningful (i.i.d. draw order); the first s_k points
    form the subsample.
    """
    k = space.n_points
    sk = s_k(k, beta)
    return hausdorff(space, np.arange(sk), np.arange(k))


@dataclass(frozen=True)
class DeltaPrimeRule:
    """Rate k -> (delta_star / delta_{k0}) * delta_k, calibrated on a
    reference sample of size k0."""

    delta_star: float
    k0: int
    ab: ABStandard

    def __call__(self, k: int) -> float:
        return self.delta_star / delta_k(self.k0, self.ab) * delta_k(k, self.ab)


def delta_prime(c, degree: int, target_dim, ab: ABStandard,
                deltas=None, window: float = 0.2, level="max",
                field: int = 2) -> DeltaPrimeRule:
    """Pointwise-dimension heuristic: find the smallest grid scale past which
    dim H_degree equals `target_dim` through the end of the grid (or, with
    target_dim="plateau", stays constant over a trailing window of
    ceil(window * len(grid)) points), and calibrate the explicit rate to it.
    """
    k0 = c.n_simplices(0)
    if deltas is None:
        top = max(float(g[:, 0].max()) for g in c.grades if g.size)
        deltas = np.linspace(0.0, top, 64)
    deltas = np.asarray(list(deltas), dtype=np.float64)
    curve = pointwise_dimension_curve(c, degree, deltas, level=level, field=field)

    star = None
    if target_dim == "plateau":
        w = max(1, math.ceil(window * len(deltas)))
        tail = curve[len(curve) - w:]
        if len(set(tail)) != 1:
            raise ValueError("no plateau found within the grid; "
                             "enlarge the delta grid or the window")
        value = tail[0]
        star_idx = len(curve) - w
        while star_idx > 0 and curve[star_idx - 1] == value:
            star_idx -= 1
        star = float(deltas[star_idx])
    else:
        for i in range(len(curve)):
            if all(v == target_dim for v in curve[i:]):
                star = float(deltas[i])
                break
        if star is None:
            raise ValueError("the curve never settles at the target dimension; "
                             "enlarge the delta grid")
    return DeltaPrimeRule(delta_star=star, k0=k0, ab=ab)


def loglog_regression(points) -> tuple:
    """OLS fit of log10(y) against log10(x); returns (slope, intercept)."""
    pts = [(float(x), float(y)) for x, y in points]
    if len(pts) < 2:
        raise ValueError("need at least 2 points")
    if any(x <= 0 or y <= 0 for x, y in pts):
        raise ValueError("log-log regression needs positive data")
    lx = np.log10([x for x, _ in pts])
    ly = np.log10([y for _, y in pts])
    slope, intercept = np.polyfit(lx, ly, 1)
    return float(slope), float(intercept)
