"""Experiment runners: two circles (with and without noise), a single
circle, Brownian-motion convergence, and a generic custom pipeline."""

from __future__ import annotations

import math
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field as dc_field

import numpy as np

from ..filtration import BifilteredComplex, build_function_rips
from ..geometry import NoiseSpec, SampledSpace, brownian_path, perturb, sample_circle
from ..invariants import bottleneck, slice_vertical
from ..modalg import smoothed_presentation
from ..scale import loglog_regression

__all__ = ["ExperimentConfig", "sublevel_barcode_1d", "two_circle_space",
           "run_two_circles", "run_circle", "run_brownian"]

INF = math.inf


@dataclass
class ExperimentConfig:
    name: str = "two-circles"
    sizes: tuple = (200,)
    seeds: tuple = (0,)
    degree: int = 1
    field: int = 2
    truncation: float = 10.0
    delta_policy: str = "grid"
    delta: float | None = None
    zeta: float = 0.0
    radii: tuple = (1.0, 0.6)
    n_grid: int = 24
    brownian_m: int = 100_000
    beta: float = 1.0
    ab: tuple = (1.0, 2.0)
    jobs: int = 1
    out_dir: str | None = None
    extra: dict = dc_field(default_factory=dict)

    def __post_init__(self):
        if not self.sizes or not self.seeds:
            raise ValueError("sizes and seeds must be nonempty")
        if self.truncation <= 0:
            raise ValueError("truncation must be > 0")

    def as_dict(self) -> dict:
        return {
            "name": self.name, "sizes": list(self.sizes),
            "seeds": list(self.seeds), "degree": self.degree,
            "field": self.field, "truncation": self.truncation,
            "delta_policy": self.delta_policy, "delta": self.delta,
            "zeta": self.zeta, "radii": list(self.radii),
            "n_grid": self.n_grid, "brownian_m": self.brownian_m,
            "beta": self.beta, "ab": list(self.ab), "jobs": self.jobs,
        }


def sublevel_barcode_1d(samples) -> list:
    """H0 barcode of the sublevel filtration of the piecewise-linear
    interpolation of values on a uniform grid of [0, 1].

    Single union-find sweep by increasing value; among equal values the
    leftmost index wins (elder rule).  One infinite bar is born at the
    global minimum.
    """
    values = np.asarray(samples, dtype=np.float64)
    n = values.size
    if n == 0:
        raise ValueError("need at least one sample")
    order = np.lexsort((np.arange(n), values))
    parent = np.full(n, -1, dtype=np.int64)
    birth = {}

    def find(a):
        root = a
        while parent[root] != root:
            root = parent[root]
        while parent[a] != root:
            parent[a], a = root, parent[a]
        return root

    bars = []
    for idx in order:
        idx = int(idx)
        parent[idx] = idx
        birth[idx] = (values[idx], idx)
        for nb in (idx - 1, idx + 1):
            if 0 <= nb < n and parent[nb] >= 0:
                ra, rb = find(idx), find(nb)
                if ra == rb:
                    continue
                if birth[ra] <= birth[rb]:
                    old, young = ra, rb
                else:
                    old, young = rb, ra
                bars.append((birth[young][0], values[idx]))
                parent[young] = old
    root = find(int(order[0]))
    bars.append((birth[root][0], INF))
    return sorted((float(b), float(d)) for b, d in bars if b < d)


def two_circle_space(radii, k, seed, zeta: float = 0.0) -> SampledSpace:
    """Two disjoint geodesic circles with distinct radii, heights centered at
    0; cross-distances are infinite.  meta carries per-circle eps and rho."""
    parts = [sample_circle(r, k, seed=[seed, i]) for i, r in enumerate(radii)]
    n = sum(p.n_points for p in parts)
    dist = np.full((n, n), INF)
    values = np.zeros((n, 1))
    off = 0
    meta = {"eps": [], "rho": [], "radii": list(radii)}
    for p in parts:
        kk = p.n_points
        dist[off:off + kk, off:off + kk] = p.dist
        values[off:off + kk] = p.values
        meta["eps"].append(p.meta["eps"])
        meta["rho"].append(p.meta["rho"])
        off += kk
    space = SampledSpace(dist, values, meta=meta)
    if zeta > 0:
        space = perturb(space, NoiseSpec(zeta=zeta, seed=[seed, len(radii)]))
        space.meta.update(meta)
    return space


def _two_circles_seed_task(args):
    cfg_dict, seed = args
    cfg = ExperimentConfig(**cfg_dict)
    t0 = time.perf_counter()
    k = cfg.sizes[0]
    space = two_circle_space(cfg.radii, k, seed, zeta=cfg.zeta)
    eps = space.meta["eps"]
    rho = space.meta["rho"]
    lo = 2.0 * max(eps)
    hi = min(rho) / 2.0
    if lo >= hi:
        # admissible window [2*max(eps), min(rho)/2) is empty: the sample is
        # too sparse for the guarantee to say anything
        return seed, []
    cap = min(rho) * (1.0 + 1e-9)
    complex_ = build_function_rips(space, max_dim=2, max_scale=cap)
    est = smoothed_presentation(complex_, 1, cfg.field)
    target = [(r, INF) for r in cfg.radii]
    rows = []
    grid = np.linspace(lo, hi, cfg.n_grid, endpoint=False)
    for delta in grid:
        bc = slice_vertical(est, float(delta))
        err = bottleneck(bc, target, cfg.truncation)
        bound = 2.0 * float(delta) + cfg.zeta
        rows.append({
            "k": k, "seed": seed, "delta": float(delta), "error": err,
            "bound": bound, "within_bound": bool(err <= bound),
            "eps": list(map(float, eps)), "rho": list(map(float, rho)),
        })
    ms = (time.perf_counter() - t0) * 1000.0
    for row in rows:
        row["runtime_ms"] = ms
    return seed, rows


def _pmap(fn, tasks, jobs):
    if jobs <= 1:
        return [fn(t) for t in tasks]
    with ProcessPoolExecutor(max_workers=jobs) as ex:
        return list(ex.map(fn, tasks))


def run_two_circles(cfg: ExperimentConfig) -> dict:
    """Sweep a delta grid over the admissible window [2*max(eps), min(rho)/2)
    and record the bottleneck error of the degree-1 smoothed estimator
    against the two-bar target; raises if the 2*delta (+zeta) bound fails."""
    tasks = [(cfg.as_dict(), seed) for seed in cfg.seeds]
    results = sorted(_pmap(_two_circles_seed_task, tasks, cfg.jobs))
    rows = [row for _, seed_rows in results for row in seed_rows]
    report = {"config": cfg.as_dict(), "rows": rows, "fit": None}
    bad = [r for r in rows if not r["within_bound"]]
    if bad:
        report["violations"] = bad
        raise RuntimeError(
            f"estimator error exceeded the bound on {len(bad)} grid points")
    return report


def run_circle(cfg: ExperimentConfig) -> dict:
    """Single-circle sanity run: one bar should sit within 2*delta of
    [radius, inf) across the admissible window."""
    radius = cfg.radii[0]
    rows = []
    for seed in cfg.seeds:
        k = cfg.sizes[0]
        space = sample_circle(radius, k, seed=seed)
        eps, rho = space.meta["eps"], space.meta["rho"]
        lo, hi = 2 * eps, rho / 2
        cap = rho * (1.0 + 1e-9)
        complex_ = build_function_rips(space, max_dim=2, max_scale=cap)
        est = smoothed_presentation(complex_, 1, cfg.field)
        for delta in np.linspace(lo, hi, cfg.n_grid, endpoint=False):
            bc = slice_vertical(est, float(delta))
            err = bottleneck(bc, [(radius, INF)], cfg.truncation)
            rows.append({"k": k, "seed": seed, "delta": float(delta),
                         "error": err, "eps": eps, "rho": rho})
    return {"config": cfg.as_dict(), "rows": rows, "fit": None}


def _line_rips_complex(positions, values, cap) -> BifilteredComplex:
    """Function-Rips 1-skeleton of points on the real line, keeping only
    edges of length <= cap (sound for queries with scale <= cap)."""
    order = np.argsort(positions, kind="stable")
    pos = np.asarray(positions, dtype=np.float64)[order]
    val = np.asarray(values, dtype=np.float64)[order].reshape(-1, 1)
    n = pos.size
    ii, jj = [], []
    hi = 0
    for i in range(n):
        hi = max(hi, i + 1)
        while hi < n and pos[hi] - pos[i] <= cap:
            hi += 1
        if hi > i + 1:
            ii.append(np.full(hi - i - 1, i, dtype=np.int64))
            jj.append(np.arange(i + 1, hi, dtype=np.int64))
    if ii:
        ii = np.concatenate(ii)
        jj = np.concatenate(jj)
    else:
        ii = np.zeros(0, dtype=np.int64)
        jj = np.zeros(0, dtype=np.int64)
    everts = np.stack([ii, jj], axis=1)
    escale = pos[jj] - pos[ii]
    efun = np.maximum(val[ii], val[jj])
    verts = [np.arange(n, dtype=np.int32).reshape(-1, 1), everts]
    grades = [np.hstack([np.zeros((n, 1)), val]),
              np.hstack([escale.reshape(-1, 1), efun])]
    return BifilteredComplex(verts, grades, max_dim=1, check=False)


def _hausdorff_to_grid(positions, m) -> float:
    """d_H between sample positions and the grid {j/m}, plus the grid's own
    half-step so the result dominates d_H(sample, [0,1]) strictly."""
    pos = np.sort(np.asarray(positions, dtype=np.float64))
    grid = np.linspace(0.0, 1.0, m + 1)
    idx = np.searchsorted(pos, grid)
    left = np.where(idx > 0, grid - pos[np.maximum(idx - 1, 0)], INF)
    right = np.where(idx < pos.size, pos[np.minimum(idx, pos.size - 1)] - grid, INF)
    grid_to_sample = float(np.minimum(left, right).max())
    jdx = np.round(pos * m) / m
    sample_to_grid = float(np.abs(pos - jdx).max())
    return max(grid_to_sample, sample_to_grid) + 0.5 / m


def _brownian_task(args):
    cfg_dict, seed, k, path_values, truth = args
    cfg = ExperimentConfig(**cfg_dict)
    m = cfg.brownian_m
    path_values = np.asarray(path_values)
    t0 = time.perf_counter()
    rng = np.random.default_rng([seed, k])
    pos = rng.uniform(0.0, 1.0, size=k)
    vals = path_values[np.floor(pos * m).astype(np.int64)]
    dh = _hausdorff_to_grid(pos, m)
    cap = 2.0 * dh * (1.0 + 1e-9)
    complex_ = _line_rips_complex(pos, vals, cap)
    est = smoothed_presentation(complex_, 0, cfg.field)
    bc = slice_vertical(est, dh)
    err = bottleneck(bc, truth, cfg.truncation)
    ms = (time.perf_counter() - t0) * 1000.0
    return {"k": k, "seed": seed, "delta": dh, "eps": dh, "error": err,
            "runtime_ms": ms}


def run_brownian(cfg: ExperimentConfig) -> dict:
    """Convergence of the degree-0 estimator on a Rademacher walk: for each
    sample size, delta is the Hausdorff distance from the sample to the time
    grid; reports (d_H, error) pairs and the fitted log-log slope."""
    path_values = brownian_path(cfg.brownian_m, seed=cfg.extra.get("path_seed", 14))
    truth = sublevel_barcode_1d(path_values)
    tasks = [(cfg.as_dict(), seed, k, path_values, truth)
             for seed in cfg.seeds for k in cfg.sizes]
    rows = _pmap(_brownian_task, tasks, cfg.jobs)
    rows.sort(key=lambda r: (r["k"], r["seed"]))
    pts = [(r["eps"], r["error"]) for r in rows if r["error"] > 0 and r["eps"] > 0]
    fit = None
    if len(pts) >= 2:
        slope, intercept = loglog_regression(pts)
        fit = {"slope": slope, "intercept": intercept}
    return {"config": cfg.as_dict(), "rows": rows, "fit": fit}
