"""Function-Rips and Euclidean function-Cech multifiltrations.

Simplices carry one grade: (scale, componentwise max of the vertex function
values).  Membership is read as grade <= query, i.e. closed sublevel sets;
this is the standard computational convention and differs from the strict
inequality only at measure-zero query grades.

Grades are stored as float64 and compared exactly.  Simplices with any
infinite pairwise distance are never created; an optional `max_scale` cap
truncates the scale axis (sound for every query with scale <= max_scale).
"""

from __future__ import annotations

from itertools import combinations

import numpy as np

from .modalg.grmat import GradedMatrix, Presentation

__all__ = ["BifilteredComplex", "build_function_rips",
           "build_function_cech_euclidean", "rescale_horizontal",
           "boundary_matrices", "dump_complex", "load_complex"]


class BifilteredComplex:
    """Graded simplicial complex: per dimension, sorted vertex tuples and
    their grades, in canonical (grade lex, vertex tuple) order."""

    __slots__ = ("verts", "grades", "max_dim", "params")

    def __init__(self, verts, grades, max_dim=None, check=True):
        self.verts = [np.asarray(v, dtype=np.int32).reshape(-1, d + 1)
                      for d, v in enumerate(verts)]
        self.grades = [np.asarray(g, dtype=np.float64) for g in grades]
        self.params = self.grades[0].shape[1] if self.grades else 0
        self.max_dim = len(self.verts) - 1 if max_dim is None else max_dim
        for d in range(len(self.verts)):
            self._canonicalize(d)
        if check:
            self._check()

    def _canonicalize(self, d):
        v, g = self.verts[d], self.grades[d]
        if len(v) == 0:
            self.grades[d] = g.reshape(0, self.params)
            return
        keys = tuple(v[:, i] for i in range(v.shape[1] - 1, -1, -1)) + \
            tuple(g[:, i] for i in range(g.shape[1] - 1, -1, -1))
        order = np.lexsort(keys)
        self.verts[d] = v[order]
        self.grades[d] = g[order]

    def _check(self):
        if self.n_simplices(0) and np.any(self.grades[0][:, 0] != 0.0):
            raise ValueError("vertex grades must have scale coordinate 0")
        for d in range(1, len(self.verts)):
            if self.n_simplices(d) == 0:
                continue
            v = self.verts[d]
            if np.any(np.diff(v, axis=1) <= 0):
                raise ValueError("simplex vertices must be strictly increasing")
            index = self.index_of(d - 1)
            for k in range(d + 1):
                faces = np.delete(v, k, axis=1)
                for row, g in zip(faces, self.grades[d]):
                    i = index.get(tuple(int(x) for x in row))
                    if i is None:
                        raise ValueError("complex is not closed under faces")
                    if np.any(self.grades[d - 1][i] > g):
                        raise ValueError("grading is not monotone along faces")

    def n_simplices(self, d: int) -> int:
        return 0 if d >= len(self.verts) else self.verts[d].shape[0]

    def index_of(self, d: int) -> dict:
        return {tuple(int(x) for x in row): i
                for i, row in enumerate(self.verts[d])}

    def iter_simplices(self):
        for d in range(len(self.verts)):
            for row, g in zip(self.verts[d], self.grades[d]):
                yield tuple(int(x) for x in row), tuple(g)

    def rescaled_first(self, factor: float) -> "BifilteredComplex":
        grades = [g.copy() for g in self.grades]
        for g in grades:
            if g.size:
                g[:, 0] *= factor
        return BifilteredComplex([v.copy() for v in self.verts], grades,
                                 self.max_dim, check=False)


def build_function_rips(space, max_dim: int, max_scale: float | None = None
                        ) -> BifilteredComplex:
    """Clique expansion of the finite-distance graph; the scale grade of a
    simplex is its exact diameter, the remaining coordinates the
    componentwise max of its vertices' function values."""
    if max_dim < 0:
        raise ValueError("max_dim must be >= 0")
    d = space.dist
    f = space.values
    k = space.n_points
    cap = np.inf if max_scale is None else float(max_scale)
    verts = [np.arange(k, dtype=np.int32).reshape(-1, 1)]
    grades = [np.hstack([np.zeros((k, 1)), f])]
    if k == 0:
        return BifilteredComplex([np.zeros((0, 1))], [np.zeros((0, 1 + f.shape[1]))],
                                 max_dim, check=False)

    adj = np.isfinite(d) & (d <= cap)
    np.fill_diagonal(adj, False)

    prev_v, prev_s, prev_f = None, None, None
    for dim in range(1, max_dim + 1):
        if dim == 1:
            ii, jj = np.nonzero(np.triu(adj, 1))
            new_v = np.stack([ii, jj], axis=1).astype(np.int32)
            new_s = d[ii, jj]
            new_f = np.maximum(f[ii], f[jj])
        else:
            chunks_v, chunks_s, chunks_f = [], [], []
            for row_v, row_s, row_f in zip(prev_v, prev_s, prev_f):
                cand = adj[row_v[0]].copy()
                for u in row_v[1:]:
                    cand &= adj[u]
                cand[:row_v[-1] + 1] = False
                cs = np.nonzero(cand)[0]
                if cs.size == 0:
                    continue
                sc = np.maximum(row_s, d[np.ix_(row_v, cs)].max(axis=0))
                keep = sc <= cap
                cs = cs[keep]
                if cs.size == 0:
                    continue
                sc = sc[keep]
                base = np.broadcast_to(row_v, (cs.size, dim)).copy()
                chunks_v.append(np.column_stack([base, cs]).astype(np.int32))
                chunks_s.append(sc)
                chunks_f.append(np.maximum(row_f, f[cs]))
            if not chunks_v:
                new_v = np.zeros((0, dim + 1), dtype=np.int32)
                new_s = np.zeros(0)
                new_f = np.zeros((0, f.shape[1]))
            else:
                new_v = np.vstack(chunks_v)
                new_s = np.concatenate(chunks_s)
                new_f = np.vstack(chunks_f)
        verts.append(new_v)
        grades.append(np.hstack([new_s.reshape(-1, 1), new_f]))
        prev_v, prev_s, prev_f = new_v, new_s, new_f
        if new_v.shape[0] == 0:
            for dd in range(dim + 1, max_dim + 1):
                verts.append(np.zeros((0, dd + 1), dtype=np.int32))
                grades.append(np.zeros((0, 1 + f.shape[1])))
            break
    return BifilteredComplex(verts, grades, max_dim, check=False)


def _circumcenter(pts: np.ndarray):
    base = pts[0]
    rel = pts[1:] - base
    if rel.shape[0] == 0:
        return base, 0.0
    rhs = 0.5 * (rel ** 2).sum(axis=1)
    sol, *_ = np.linalg.lstsq(rel, rhs, rcond=None)
    c = base + sol
    r = np.linalg.norm(pts - c, axis=1)
    if r.max() - r.min() > 1e-9 * (1.0 + r.max()):
        return None, None
    return c, float(r.max())


def _meb_radius(pts: np.ndarray) -> float:
    """Minimum enclosing ball radius of a small point set (closed balls)."""
    n, dim = pts.shape
    best = None
    for size in range(1, min(n, dim + 1) + 1):
        for sub in combinations(range(n), size):
            c, r = _circumcenter(pts[list(sub)])
            if c is None:
                continue
            if np.linalg.norm(pts - c, axis=1).max() <= r * (1 + 1e-9) + 1e-12:
                if best is None or r < best:
                    best = r
    return float(best)


def build_function_cech_euclidean(space, max_dim: int,
                                  max_scale: float | None = None
                                  ) -> BifilteredComplex:
    """Function-Cech complex for Euclidean ambient data: the scale grade of a
    simplex is the minimum enclosing ball radius of its vertices.

    Simplex enumeration reuses the Rips rule (diameter <= 2 * scale cap) and
    the grade is then replaced by the enclosing-ball radius; monotonicity is
    enforced exactly by maxing each grade with its facets' grades (the raw
    radii can differ by float dust from the mathematically monotone values).
    """
    if space.coords is None:
        raise ValueError("Cech construction requires ambient coordinates")
    rips_cap = None if max_scale is None else 2.0 * float(max_scale)
    rips = build_function_rips(space, max_dim, rips_cap)
    verts = [v.copy() for v in rips.verts]
    grades = [g.copy() for g in rips.grades]
    prev_index = None
    for dim in range(1, len(verts)):
        if verts[dim].shape[0] == 0:
            continue
        scale = np.array([_meb_radius(space.coords[row]) for row in verts[dim]])
        grades[dim][:, 0] = scale
        # snap up to facet grades so grading is monotone bit-exactly
        if prev_index is None:
            prev_index = {tuple(int(x) for x in row): i
                          for i, row in enumerate(verts[dim - 1])}
        for j, row in enumerate(verts[dim]):
            for kdrop in range(dim + 1):
                face = tuple(int(x) for x in np.delete(row, kdrop))
                g = grades[dim - 1][prev_index[face]]
                np.maximum(grades[dim][j], g, out=grades[dim][j])
        prev_index = {tuple(int(x) for x in row): i
                      for i, row in enumerate(verts[dim])}
        if max_scale is not None:
            keep = grades[dim][:, 0] <= max_scale
            verts[dim] = verts[dim][keep]
            grades[dim] = grades[dim][keep]
            prev_index = {tuple(int(x) for x in row): i
                          for i, row in enumerate(verts[dim])}
    return BifilteredComplex(verts, grades, max_dim, check=False)


def rescale_horizontal(obj, factor: float):
    """Scale the first grade coordinate by `factor` (> 0); exact on floats
    for dyadic factors, so doubling then halving is the identity."""
    if factor <= 0:
        raise ValueError("factor must be > 0")
    if isinstance(obj, (GradedMatrix, Presentation, BifilteredComplex)):
        return obj.rescaled_first(factor)
    raise TypeError(f"cannot rescale {type(obj).__name__}")


def boundary_matrices(c: BifilteredComplex, degree: int, field: int = 2):
    """(d_r, d_{r+1}) as graded matrices; entries follow the alternating-face
    rule with sorted-vertex orientation (all 1 over F2)."""
    if degree < 0 or degree > c.max_dim:
        raise ValueError("degree exceeds the built skeleton")

    def matrix(r: int) -> GradedMatrix:
        n_cols = c.n_simplices(r)
        if r == 0:
            return GradedMatrix(np.zeros((0, c.params)), c.grades[0],
                                [()] * n_cols, field, validate=False)
        rows = c.grades[r - 1] if c.n_simplices(r - 1) else \
            np.zeros((0, c.params))
        if n_cols == 0:
            return GradedMatrix(rows, np.zeros((0, c.params)), [], field,
                                validate=False)
        index = c.index_of(r - 1)
        cols = []
        for row in c.verts[r]:
            ent = []
            t = tuple(int(x) for x in row)
            for k in range(r + 1):
                sign = 1 if k % 2 == 0 else field - 1
                ent.append((index[t[:k] + t[k + 1:]], sign))
            ent.sort()
            cols.append(tuple(ent))
        return GradedMatrix(rows, c.grades[r], cols, field, validate=False)

    upper = matrix(degree + 1) if degree + 1 <= c.max_dim else \
        GradedMatrix(c.grades[degree] if c.n_simplices(degree) else
                     np.zeros((0, c.params)),
                     np.zeros((0, c.params)), [], field, validate=False)
    return matrix(degree), upper


def dump_complex(c: BifilteredComplex) -> str:
    """One simplex per line: `dim;v0 v1 ...;g1 g2 ... gm`, canonical order."""
    lines = []
    for d in range(len(c.verts)):
        for row, g in zip(c.verts[d], c.grades[d]):
            vs = " ".join(str(int(x)) for x in row)
            gs = " ".join(repr(float(x)) for x in g)
            lines.append(f"{d};{vs};{gs}")
    return "\n".join(lines) + ("\n" if lines else "")


def load_complex(text: str, max_dim: int | None = None) -> BifilteredComplex:
    verts, grades = {}, {}
    for line in text.splitlines():
        line = line.strip()
        if not line:
            continue
        dpart, vpart, gpart = line.split(";")
        d = int(dpart)
        verts.setdefault(d, []).append([int(x) for x in vpart.split()])
        grades.setdefault(d, []).append([float(x) for x in gpart.split()])
    if not verts:
        raise ValueError("empty complex file")
    top = max(verts)
    m = len(next(iter(grades.values()))[0])
    vlist = [np.asarray(verts.get(d, []), dtype=np.int32).reshape(-1, d + 1)
             for d in range(top + 1)]
    glist = [np.asarray(grades.get(d, []), dtype=np.float64).reshape(-1, m)
             for d in range(top + 1)]
    return BifilteredComplex(vlist, glist, max_dim if max_dim is not None else top)
