"""One-parameter restrictions and distances.

Barcodes are multisets of half-open intervals [birth, death), death possibly
+inf; bars with birth >= death are dropped on construction.  The bottleneck
distance is exact: binary search over the finite set of candidate costs with
a bipartite feasibility test on the doubled matching graph.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .filtration import BifilteredComplex, boundary_matrices
from .modalg import backend, engine_py
from .modalg.grmat import Presentation

__all__ = ["Line", "truncate_barcode", "slice_vertical", "slice_line",
           "bottleneck", "matching_distance_mc", "vertical_bottleneck_grades",
           "pointwise_dimension_curve"]

INF = math.inf


def _clean(bars) -> list:
    return sorted((float(b), float(d)) for b, d in bars if b < d)


def truncate_barcode(bars, cap: float) -> list:
    """Cap deaths at `cap` and drop bars that become empty."""
    return _clean((b, min(d, cap)) for b, d in bars)


@dataclass(frozen=True)
class Line:
    """Positively sloped line base + t * dir, normalized ||dir||_inf = 1."""

    base: tuple
    dir: tuple

    def __post_init__(self):
        base = tuple(float(x) for x in self.base)
        d = np.asarray(self.dir, dtype=np.float64)
        if len(base) != d.size:
            raise ValueError("base and dir dimensions differ")
        if np.any(d <= 0):
            raise ValueError("line direction must be strictly positive")
        d = d / d.max()
        object.__setattr__(self, "base", base)
        object.__setattr__(self, "dir", tuple(float(x) for x in d))

    def push(self, grade) -> float:
        """Smallest t with base + t*dir >= grade (entry parameter)."""
        return max((g - b) / d for g, b, d in zip(grade, self.base, self.dir))

    @property
    def weight(self) -> float:
        return min(self.dir)


def _barcode_from_graded(births, col_params, columns, field) -> list:
    """Barcode of coker of a 1-parameter graded matrix.

    births: per-row birth values; columns: sparse (row, val) lists over rows
    sorted by (birth, index); col_params: per-column grade.  Columns must be
    pre-sorted by (grade, index).
    """
    n_rows = len(births)
    if field == 2:
        pivots = backend.pair_reduce_f2([[r for r, _ in col] for col in columns],
                                        n_rows)
    else:
        pivots = engine_py.pair_reduce_gf(
            [{r: v for r, v in col} for col in columns], field)
    bars = []
    paired = set()
    for j, piv in enumerate(pivots):
        if piv >= 0:
            paired.add(piv)
            bars.append((births[piv], col_params[j]))
    for i in range(n_rows):
        if i not in paired:
            bars.append((births[i], INF))
    return _clean(bars)


def slice_vertical(P: Presentation, delta: float) -> list:
    """Barcode of the module restricted to the vertical slice at `delta`."""
    if P.params != 2:
        raise ValueError("vertical slices require exactly 2 parameters; "
                         "use slice_line for more")
    M = P.matrix
    rsel = np.nonzero(M.row_grades[:, 0] <= delta)[0]
    csel = np.nonzero(M.col_grades[:, 0] <= delta)[0]
    births = M.row_grades[rsel, 1]
    order = np.lexsort((rsel, births))
    rsel, births = rsel[order], births[order]
    pos = {int(r): i for i, r in enumerate(rsel)}
    cparams = M.col_grades[csel, 1]
    corder = np.lexsort((csel, cparams))
    csel, cparams = csel[corder], cparams[corder]
    cols = [sorted((pos[r], v) for r, v in M.columns[j]) for j in csel]
    return _barcode_from_graded(births.tolist(), cparams.tolist(), cols, M.field)


def _line_barcode_presentation(P: Presentation, line: Line) -> list:
    M = P.matrix
    births = [line.push(g) for g in M.row_grades]
    cparams = [line.push(g) for g in M.col_grades]
    order = np.lexsort((np.arange(M.nrows), births))
    pos = np.empty(M.nrows, dtype=np.int64)
    pos[order] = np.arange(M.nrows)
    births_sorted = [births[i] for i in order]
    corder = np.lexsort((np.arange(M.ncols), cparams))
    cols = [sorted((int(pos[r]), v) for r, v in M.columns[j]) for j in corder]
    return _barcode_from_graded(births_sorted, [cparams[j] for j in corder],
                                cols, M.field)


def _line_barcode_complex(c: BifilteredComplex, line: Line, degree: int,
                          field: int) -> list:
    """Standard persistence of the complex filtered by the line push."""
    if degree + 1 > c.max_dim:
        raise ValueError("complex skeleton insufficient for the requested degree")
    t_mid = [line.push(g) for g in c.grades[degree]]
    d_r, d_r1 = boundary_matrices(c, degree, field)
    # positivity of r-simplices: reduce d_r with rows/cols in filtration order
    if degree == 0:
        positive = [True] * c.n_simplices(0)
        mid_order = np.lexsort((np.arange(len(t_mid)), t_mid))
    else:
        t_lo = [line.push(g) for g in c.grades[degree - 1]]
        lo_order = np.lexsort((np.arange(len(t_lo)), t_lo))
        lo_pos = np.empty(len(t_lo), dtype=np.int64)
        lo_pos[lo_order] = np.arange(len(t_lo))
        mid_order = np.lexsort((np.arange(len(t_mid)), t_mid))
        cols = [sorted((int(lo_pos[r]), v) for r, v in d_r.columns[j])
                for j in mid_order]
        if field == 2:
            piv = backend.pair_reduce_f2([[r for r, _ in col] for col in cols],
                                         len(t_lo))
        else:
            piv = engine_py.pair_reduce_gf(
                [{r: v for r, v in col} for col in cols], field)
        positive_sorted = [p < 0 for p in piv]
        positive = [False] * len(t_mid)
        for k, j in enumerate(mid_order):
            positive[j] = positive_sorted[k]

    mid_pos = np.empty(len(t_mid), dtype=np.int64)
    mid_pos[mid_order] = np.arange(len(t_mid))
    t_hi = [line.push(g) for g in c.grades[degree + 1]]
    hi_order = np.lexsort((np.arange(len(t_hi)), t_hi))
    cols_hi = [sorted((int(mid_pos[r]), v) for r, v in d_r1.columns[j])
               for j in hi_order]
    if field == 2:
        piv_hi = backend.pair_reduce_f2([[r for r, _ in col] for col in cols_hi],
                                        len(t_mid))
    else:
        piv_hi = engine_py.pair_reduce_gf(
            [{r: v for r, v in col} for col in cols_hi], field)

    bars = []
    killed = set()
    t_mid_sorted = [t_mid[j] for j in mid_order]
    for k, piv in enumerate(piv_hi):
        if piv >= 0:
            killed.add(piv)
            bars.append((t_mid_sorted[piv], t_hi[hi_order[k]]))
    for k, j in enumerate(mid_order):
        if positive[j] and k not in killed:
            bars.append((t_mid_sorted[k], INF))
    return _clean(bars)


def slice_line(obj, line: Line, degree: int | None = None, field: int = 2) -> list:
    """Fibered barcode along a positively sloped line.

    Grades push to t(g) = max_i (g_i - base_i) / dir_i; a Presentation slices
    directly, a BifilteredComplex needs the homology degree.
    """
    if isinstance(obj, Presentation):
        return _line_barcode_presentation(obj, line)
    if isinstance(obj, BifilteredComplex):
        if degree is None:
            raise ValueError("slicing a complex requires a homology degree")
        return _line_barcode_complex(obj, line, degree, field)
    raise TypeError(f"cannot slice {type(obj).__name__}")


def _max_matching(adj, n_left, n_right) -> int:
    """Simple augmenting-path bipartite maximum matching."""
    match_r = [-1] * n_right
    match_l = [-1] * n_left

    def augment(u, seen):
        for v in adj[u]:
            if v in seen:
                continue
            seen.add(v)
            if match_r[v] < 0 or augment(match_r[v], seen):
                match_r[v] = u
                match_l[u] = v
                return True
        return False

    size = 0
    for u in range(n_left):
        if augment(u, set()):
            size += 1
    return size


def _near_pairs(pa, pb, radii):
    """For each left bar, the right bars with sup-cost < its radius."""
    order = np.argsort(pb[:, 0], kind="stable")
    bs = pb[order]
    out_i, out_j, out_c = [], [], []
    for i in range(pa.shape[0]):
        r = radii[i]
        if r <= 0:
            continue
        lo = np.searchsorted(bs[:, 0], pa[i, 0] - r, side="left")
        hi = np.searchsorted(bs[:, 0], pa[i, 0] + r, side="right")
        if lo == hi:
            continue
        window = bs[lo:hi]
        cost = np.maximum(np.abs(window[:, 0] - pa[i, 0]),
                          np.abs(window[:, 1] - pa[i, 1]))
        keep = cost < r
        out_i.extend([i] * int(keep.sum()))
        out_j.extend(order[lo:hi][keep].tolist())
        out_c.extend(cost[keep].tolist())
    return out_i, out_j, out_c


def _bottleneck_feasible(ha, hb, ei, ej, ec, ethr, eps) -> bool:
    """Perfect-matching test at threshold eps on the pruned doubled graph.

    Only bars with half-length > eps are required; a pair is useful only
    when usable (cost <= eps) and touching a required bar (eps < threshold),
    everything else deletes.
    """
    mask = (ec <= eps) & (ethr > eps)
    pi, pj = ei[mask], ej[mask]
    keep_a = sorted(set(np.nonzero(ha > eps)[0].tolist()) | set(pi.tolist()))
    keep_b = sorted(set(np.nonzero(hb > eps)[0].tolist()) | set(pj.tolist()))
    la = {i: k for k, i in enumerate(keep_a)}
    rb = {j: k for k, j in enumerate(keep_b)}
    na, nb = len(la), len(rb)
    # left = A-bars then B-ghosts; right = B-bars then A-ghosts
    adj = [[] for _ in range(na + nb)]
    for i, j in zip(pi.tolist(), pj.tolist()):
        adj[la[i]].append(rb[j])
    for i, k in la.items():
        if ha[i] <= eps:
            adj[k].append(nb + k)
    for j, k in rb.items():
        row = [nb + t for t in range(na)]
        if hb[j] <= eps:
            row.insert(0, k)
        adj[na + k] = row
    return _max_matching(adj, na + nb, na + nb) == na + nb


def bottleneck(A, B, truncation: float = 10.0) -> float:
    """Exact bottleneck distance between truncated barcodes.

    Binary search over the finite candidate set (half-lengths and the pair
    costs that can support an optimal matching, i.e. cost < max of the two
    half-lengths) with bipartite feasibility tests.
    """
    if truncation <= 0:
        raise ValueError("truncation must be > 0")
    A = truncate_barcode(A, truncation)
    B = truncate_barcode(B, truncation)
    if not A and not B:
        return 0.0
    pa = np.asarray(A, dtype=np.float64).reshape(-1, 2)
    pb = np.asarray(B, dtype=np.float64).reshape(-1, 2)
    ha = (pa[:, 1] - pa[:, 0]) / 2 if len(A) else np.zeros(0)
    hb = (pb[:, 1] - pb[:, 0]) / 2 if len(B) else np.zeros(0)

    ia, ja, ca = _near_pairs(pa, pb, ha)
    jb, ib, cb = _near_pairs(pb, pa, hb)
    edges = {}
    for i, j, c in zip(ia + ib, ja + jb, ca + cb):
        edges[(i, j)] = c
    ei = np.asarray([i for i, _ in edges], dtype=np.int64)
    ej = np.asarray([j for _, j in edges], dtype=np.int64)
    ec = np.asarray(list(edges.values()), dtype=np.float64)
    ethr = np.maximum(ha[ei], hb[ej]) if len(edges) else np.zeros(0)

    cands = np.unique(np.concatenate([[0.0], ha, hb, ec]))
    lo, hi = 0, len(cands) - 1
    while lo < hi:
        mid = (lo + hi) // 2
        if _bottleneck_feasible(ha, hb, ei, ej, ec, ethr, cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cands[lo])


def _grade_bbox(objs):
    los, his = [], []
    for obj in objs:
        if isinstance(obj, Presentation):
            g = np.vstack([obj.matrix.row_grades.reshape(-1, obj.params),
                           obj.matrix.col_grades.reshape(-1, obj.params)])
        else:
            g = np.vstack([x for x in obj.grades if x.size])
        if g.size:
            los.append(g.min(axis=0))
            his.append(g.max(axis=0))
    if not los:
        raise ValueError("cannot bound the grades of empty objects")
    return np.min(los, axis=0), np.max(his, axis=0)


def matching_distance_mc(A, B, n_lines: int, seed: int = 0,
                         truncation: float = 10.0, degree: int | None = None,
                         field: int = 2) -> float:
    """Monte-Carlo matching distance: max over random lines of the weighted
    bottleneck distance between the sliced barcodes.

    Line i is drawn from a counter-based generator keyed by (seed, i): base
    uniform in the joint grade bounding box, direction uniform on the
    positive simplex then sup-normalized; weight = min coordinate.
    """
    if n_lines < 1:
        raise ValueError("n_lines must be >= 1")
    try:
        lo, hi = _grade_bbox([A, B])
    except ValueError:
        return 0.0  # both modules are identically zero
    m = len(lo)
    best = 0.0
    for i in range(n_lines):
        rng = np.random.default_rng([seed, i])
        base = rng.uniform(lo, hi)
        w = rng.dirichlet(np.ones(m))
        line = Line(tuple(base), tuple(w / w.max()))
        ba = slice_line(A, line, degree, field)
        bb = slice_line(B, line, degree, field)
        best = max(best, line.weight * bottleneck(ba, bb, truncation))
    return best


def vertical_bottleneck_grades(A, B, first_coord_tol: float = 0.0) -> float:
    """Min over bijections of the max sup-cost in coordinates 2..m, matched
    pairs constrained to first coordinates within `first_coord_tol`;
    cardinality mismatch or infeasibility gives +inf."""
    A = [tuple(map(float, a)) for a in A]
    B = [tuple(map(float, b)) for b in B]
    if A and B and len(A[0]) != len(B[0]):
        raise ValueError("grade dimension mismatch")
    if len(A) != len(B):
        return INF
    if not A:
        return 0.0
    n = len(A)
    cost = [[max((abs(x - y) for x, y in zip(a[1:], b[1:])), default=0.0)
             if abs(a[0] - b[0]) <= first_coord_tol else INF
             for b in B] for a in A]
    cands = sorted({c for row in cost for c in row if c < INF})
    if not cands:
        return INF

    def feasible(eps):
        adj = [[j for j in range(n) if cost[i][j] <= eps] for i in range(n)]
        return _max_matching(adj, n, n) == n

    lo, hi = 0, len(cands) - 1
    if not feasible(cands[hi]):
        return INF
    while lo < hi:
        mid = (lo + hi) // 2
        if feasible(cands[mid]):
            hi = mid
        else:
            lo = mid + 1
    return cands[lo]


def _plain_homology_dim(c: BifilteredComplex, degree: int, grade, field: int) -> int:
    """dim H_degree of the sublevel complex at `grade` by sparse ranks."""
    z = np.asarray(grade, dtype=np.float64)
    sel = [np.nonzero(np.all(c.grades[d] <= z, axis=1))[0]
           if c.n_simplices(d) else np.array([], dtype=np.int64)
           for d in range(min(degree + 2, c.max_dim + 1))]
    if degree >= len(sel) or len(sel[degree]) == 0:
        return 0
    d_r, d_r1 = boundary_matrices(c, degree, field)

    def rank_at(mat, rows_keep, cols_keep):
        look = np.full(mat.nrows, -1, dtype=np.int64)
        look[rows_keep] = np.arange(len(rows_keep))
        cols = [[int(look[r]) for r, _ in mat.columns[j]] for j in cols_keep]
        if field == 2:
            return backend.rank_f2(cols, len(rows_keep))
        return engine_py.rank_gf(
            [{int(look[r]): v for r, v in mat.columns[j]} for j in cols_keep],
            field)

    n_mid = len(sel[degree])
    rank_dr = 0
    if degree > 0 and len(sel[degree - 1]):
        rank_dr = rank_at(d_r, sel[degree - 1], sel[degree])
    rank_dr1 = 0
    if degree + 1 < len(sel) and len(sel[degree + 1]):
        rank_dr1 = rank_at(d_r1, sel[degree], sel[degree + 1])
    return n_mid - rank_dr - rank_dr1


def pointwise_dimension_curve(c: BifilteredComplex, degree: int, deltas,
                              level="max", field: int = 2) -> list:
    """dim H_degree at (delta, level) for each delta in the grid; `level`
    defaults to the componentwise top function value."""
    if c.n_simplices(0) == 0:
        return [0 for _ in deltas]
    if degree + 1 > c.max_dim:
        raise ValueError("complex skeleton insufficient for the requested degree")
    if level == "max":
        x = c.grades[0][:, 1:].max(axis=0)
    else:
        x = np.atleast_1d(np.asarray(level, dtype=np.float64))
    if c.params == 2:
        from .modalg import homology_presentation, hilbert_function
        P = homology_presentation(c, degree, field)
        return hilbert_function(P, [(float(t), *x) for t in deltas])
    return [_plain_homology_dim(c, degree, (float(t), *x), field)
            for t in deltas]
