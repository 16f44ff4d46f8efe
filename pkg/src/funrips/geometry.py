"""Point clouds with metrics and function values, plus synthetic samplers.

A SampledSpace is immutable after construction: a symmetric distance matrix
(np.inf encodes disconnected pairs), one row of function values per point,
and optional ambient coordinates.  All samplers take explicit seeds.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import shortest_path

__all__ = ["SampledSpace", "NoiseSpec", "hausdorff", "graph_geodesic",
           "farthest_point_sample", "sample_circle", "brownian_path", "perturb"]


@dataclass(frozen=True)
class SampledSpace:
    """Finite sample of a metric space with known function values."""

    dist: np.ndarray
    values: np.ndarray
    coords: np.ndarray | None = None
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        dist = np.asarray(self.dist, dtype=np.float64)
        values = np.asarray(self.values, dtype=np.float64)
        if values.ndim == 1:
            values = values.reshape(-1, 1)
        object.__setattr__(self, "dist", dist)
        object.__setattr__(self, "values", values)
        k = dist.shape[0]
        if dist.shape != (k, k):
            raise ValueError("distance matrix must be square")
        if values.shape[0] != k:
            raise ValueError("values must have one row per point")
        if k:
            if not np.array_equal(dist, dist.T):
                raise ValueError("distance matrix must be symmetric")
            if np.any(np.diag(dist) != 0):
                raise ValueError("distance matrix must have zero diagonal")
            if np.any(dist < 0):
                raise ValueError("distances must be nonnegative")
        if self.coords is not None:
            coords = np.asarray(self.coords, dtype=np.float64)
            if coords.shape[0] != k:
                raise ValueError("coords must have one row per point")
            object.__setattr__(self, "coords", coords)

    @property
    def n_points(self) -> int:
        return self.dist.shape[0]

    @property
    def n_values(self) -> int:
        return self.values.shape[1]

    @staticmethod
    def from_coords(coords, values, meta=None) -> "SampledSpace":
        coords = np.asarray(coords, dtype=np.float64)
        diff = coords[:, None, :] - coords[None, :, :]
        dist = np.sqrt((diff ** 2).sum(axis=2))
        dist = np.minimum(dist, dist.T)
        np.fill_diagonal(dist, 0.0)
        return SampledSpace(dist, values, coords=coords, meta=meta or {})

    def subset(self, idx) -> "SampledSpace":
        idx = np.asarray(idx, dtype=np.int64)
        return SampledSpace(self.dist[np.ix_(idx, idx)], self.values[idx],
                            None if self.coords is None else self.coords[idx],
                            dict(self.meta))


@dataclass(frozen=True)
class NoiseSpec:
    """Input-noise model: sup-norm function noise and optional graph metric.

    zeta is the sup-norm bound on function-value noise; kappa, when set,
    replaces the metric by the hop-count shortest path in the
    kappa-neighborhood graph.  lam (= 1 + 4*eps/kappa) is carried along for
    reporting; it does not enter the perturbation itself.
    """

    zeta: float = 0.0
    kappa: float | None = None
    lam: float | None = None
    seed: int = 0

    def __post_init__(self):
        if self.zeta < 0:
            raise ValueError("zeta must be >= 0")
        if self.kappa is not None and self.kappa <= 0:
            raise ValueError("kappa must be > 0")
        if self.lam is not None and self.lam < 1:
            raise ValueError("lambda must be >= 1")


def hausdorff(space: SampledSpace, a_idx, b_idx) -> float:
    """Hausdorff distance between two point subsets, using known distances."""
    a = np.asarray(a_idx, dtype=np.int64)
    b = np.asarray(b_idx, dtype=np.int64)
    if a.size == 0 or b.size == 0:
        raise ValueError("empty-set Hausdorff undefined")
    sub = space.dist[np.ix_(a, b)]
    return float(max(sub.min(axis=1).max(), sub.min(axis=0).max()))


def graph_geodesic(space: SampledSpace, kappa: float,
                   weighted: bool = False) -> np.ndarray:
    """Shortest-path distance in the kappa-neighborhood graph.

    Unweighted (hop count) by default, matching the d/kappa scale of the
    graph-approximation bound; +inf across components.
    """
    if kappa <= 0:
        raise ValueError("kappa must be > 0")
    k = space.n_points
    adj = (space.dist <= kappa) & ~np.eye(k, dtype=bool)
    if weighted:
        graph = csr_matrix(np.where(adj, space.dist, 0.0))
        out = shortest_path(graph, method="D", directed=False)
    else:
        graph = csr_matrix(adj.astype(np.float64))
        out = shortest_path(graph, method="D", directed=False, unweighted=True)
    np.fill_diagonal(out, 0.0)
    return out


def farthest_point_sample(space: SampledSpace, k: int, start: int = 0) -> np.ndarray:
    """Greedy max-min ordering of k points; ties broken by smallest index."""
    n = space.n_points
    if not (1 <= k <= n):
        raise ValueError("k out of range")
    if not (0 <= start < n):
        raise ValueError("start out of range")
    chosen = [start]
    mind = space.dist[start].copy()
    for _ in range(k - 1):
        # argmax returns the smallest index among ties
        nxt = int(np.argmax(mind))
        chosen.append(nxt)
        mind = np.minimum(mind, space.dist[nxt])
    return np.asarray(chosen, dtype=np.int64)


def circle_eps_to_grid(radius: float, angles: np.ndarray, grid_size: int) -> float:
    """Hausdorff distance (arc length) from a circle sample to the dense
    deterministic reference grid of `grid_size` angles."""
    grid = np.linspace(0.0, 2 * np.pi, grid_size, endpoint=False)
    d = np.abs(grid[:, None] - angles[None, :]) % (2 * np.pi)
    d = np.minimum(d, 2 * np.pi - d) * radius
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def sample_circle(radius: float, k: int, seed: int = 0,
                  grid_size: int = 10_000) -> SampledSpace:
    """Uniform sample of a circle with arc-length metric and height values.

    The height function is 1-Lipschitz for the geodesic metric.  meta records
    the sampling error `eps` against a dense reference grid plus the grid's
    own resolution (so d_H(sample, circle) < eps holds strictly, as the
    epsilon-sample condition requires), and the convexity radius
    `rho` = pi * radius / 2.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if radius <= 0:
        raise ValueError("radius must be > 0")
    rng = np.random.default_rng(seed)
    angles = rng.uniform(0.0, 2 * np.pi, size=k)
    d = np.abs(angles[:, None] - angles[None, :]) % (2 * np.pi)
    dist = np.minimum(d, 2 * np.pi - d) * radius
    dist = np.minimum(dist, dist.T)
    np.fill_diagonal(dist, 0.0)
    heights = radius * np.sin(angles)
    coords = radius * np.stack([np.cos(angles), np.sin(angles)], axis=1)
    eps_grid = circle_eps_to_grid(radius, angles, grid_size)
    eps = eps_grid + np.pi * radius / grid_size
    meta = {"eps": eps, "eps_grid": eps_grid, "rho": np.pi * radius / 2.0,
            "angles": angles, "radius": radius}
    return SampledSpace(dist, heights, coords=coords, meta=meta)


def brownian_path(m: int, seed: int = 0) -> np.ndarray:
    """Rademacher random-walk approximation of Brownian motion on [0, 1]:
    m steps of +-sqrt(1/m), returning the m+1 values at t_j = j/m."""
    if m < 1:
        raise ValueError("m must be >= 1")
    rng = np.random.default_rng(seed)
    steps = rng.integers(0, 2, size=m) * 2 - 1
    out = np.empty(m + 1, dtype=np.float64)
    out[0] = 0.0
    np.cumsum(steps * np.sqrt(1.0 / m), out=out[1:])
    return out


def perturb(space: SampledSpace, noise: NoiseSpec) -> SampledSpace:
    """Add uniform [-zeta, zeta] noise to every function value; when the
    noise spec carries a neighborhood radius, switch to the graph metric."""
    rng = np.random.default_rng(noise.seed)
    values = space.values + rng.uniform(-noise.zeta, noise.zeta,
                                        size=space.values.shape)
    if noise.zeta == 0:
        values = space.values.copy()
    dist = space.dist
    if noise.kappa is not None:
        dist = graph_geodesic(space, noise.kappa)
    meta = dict(space.meta)
    meta["noise"] = {"zeta": noise.zeta, "kappa": noise.kappa, "lam": noise.lam,
                     "seed": noise.seed}
    return SampledSpace(dist, values, coords=space.coords, meta=meta)
