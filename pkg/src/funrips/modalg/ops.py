"""Core graded-matrix operations.

The 2-parameter kernel follows the recorded-operations (slave matrix) column
reduction: columns are processed level by level along the second grade
coordinate and, within a level, by increasing first coordinate; each column
that reduces to zero contributes one minimal kernel generator, born at
(own first coordinate, current level).  The queue schedule (default) and the
per-level re-scan produce identical generator grades.
"""

from __future__ import annotations

from bisect import bisect_left, bisect_right

import numpy as np

from . import backend, engine_py
from .grmat import GradedMatrix, Presentation

__all__ = [
    "ker_min_gen", "image_presentation", "homology_presentation",
    "smoothed_presentation", "minimize", "betti_numbers", "hilbert_function",
]


def _colex_key(grade) -> tuple:
    return tuple(grade[::-1])


def _sweep_setup(col_grades: np.ndarray):
    """Sort columns for the sweep: by (first coordinate, index); levels are
    the ranks of the second coordinate (all zero when m = 1)."""
    n, m = col_grades.shape
    if m == 1:
        order = np.lexsort((np.arange(n), col_grades[:, 0]))
        levels = np.zeros(n, dtype=np.int64)
        n_levels, ys = 1, None
    else:
        order = np.lexsort((np.arange(n), col_grades[:, 0]))
        ys = np.unique(col_grades[:, 1])
        levels = np.searchsorted(ys, col_grades[order, 1])
        n_levels = len(ys)
    return order, levels, n_levels, ys


class _KernelState:
    """Sweep output kept around for lifting through the kernel basis."""

    __slots__ = ("order", "pos_of", "gens", "slaves", "pivots", "field", "src")

    def __init__(self, D: GradedMatrix, use_queue: bool):
        self.src = D
        self.field = D.field
        order, levels, n_levels, ys = _sweep_setup(D.col_grades)
        self.order = order
        self.pos_of = np.empty(len(order), dtype=np.int64)
        self.pos_of[order] = np.arange(len(order))
        g = D.col_grades[order]

        if D.field == 2:
            cols = [D.rows_of(j) for j in order]
            slaves, death, _ = backend.sweep_f2(cols, levels.tolist(), n_levels,
                                                use_queue)
        else:
            cols = [{r: v for r, v in D.columns[j]} for j in order]
            slaves, death, _ = engine_py.sweep_gf(cols, levels.tolist(), n_levels,
                                                  D.field, use_queue)
        gens = []
        for pos in range(len(order)):
            if death[pos] < 0:
                continue
            if D.params == 1:
                grade = (g[pos, 0],)
            else:
                grade = (g[pos, 0], float(ys[death[pos]]))
            gens.append((pos, grade))
        # canonical generator order: colex on grade, then sweep position
        gens.sort(key=lambda t: (_colex_key(t[1]), t[0]))
        self.gens = gens
        self.slaves = slaves
        self.pivots = {pos: i for i, (pos, _) in enumerate(gens)}

    def matrix(self) -> GradedMatrix:
        """Kernel generators as a graded matrix over the source columns."""
        D = self.src
        col_grades = np.array([grade for _, grade in self.gens],
                              dtype=np.float64).reshape(len(self.gens), D.params)
        columns = []
        for pos, _ in self.gens:
            s = self.slaves[pos]
            if D.field == 2:
                ent = sorted((int(self.order[q]), 1) for q in s)
            else:
                ent = sorted((int(self.order[q]), v) for q, v in s.items())
            columns.append(tuple(ent))
        return GradedMatrix(D.col_grades, col_grades, columns, D.field)

    def lift(self, targets_cols, target_grades) -> list:
        """Express columns (given over the source's column indices) in the
        kernel basis; returns sparse columns over generator indices."""
        if self.field == 2:
            slav = [self.slaves[pos] for pos, _ in self.gens]
            pivs = [pos for pos, _ in self.gens]
            targs = [sorted(int(self.pos_of[r]) for r, _ in col)
                     for col in targets_cols]
            lams = backend.lift_f2(slav, pivs, targs, len(self.order))
            return [tuple(sorted((self.pivots[q], 1) for q in lam)) for lam in lams]
        by_pivot = {pos: self.slaves[pos] for pos, _ in self.gens}
        targs = [{int(self.pos_of[r]): v for r, v in col} for col in targets_cols]
        lams = engine_py.lift_gf(by_pivot, targs, self.field)
        return [tuple(sorted((self.pivots[q], v) for q, v in lam.items()))
                for lam in lams]


def ker_min_gen(D: GradedMatrix, use_queue: bool = True) -> GradedMatrix:
    """Minimal homogeneous generators of ker(D).

    Returns S with one column per generator (rows indexed by the columns of
    D, row grades = column grades of D); D @ S = 0 identically.
    """
    if D.params > 2:
        raise ValueError("kernel computation supported for <= 2 parameters")
    return _KernelState(D, use_queue).matrix()


def image_presentation(Gamma: GradedMatrix, Upsilon: GradedMatrix,
                       use_queue: bool = True) -> Presentation:
    """Presentation of the image of the cokernel-level map induced by Gamma.

    Concatenates [Gamma | -Upsilon], computes the minimal kernel generators,
    and projects them onto the Gamma block; the cokernel of the result is
    the image module.
    """
    if Gamma.field != Upsilon.field:
        raise ValueError("field mismatch")
    if not np.array_equal(Gamma.row_grades, Upsilon.row_grades):
        raise ValueError("Gamma and Upsilon must share identical row grades")
    p = Gamma.field
    m1 = Gamma.ncols
    neg = [tuple((r, (-v) % p) for r, v in col) for col in Upsilon.columns]
    D = GradedMatrix(Gamma.row_grades,
                     np.vstack([Gamma.col_grades, Upsilon.col_grades]),
                     list(Gamma.columns) + neg, p, validate=False)
    S = ker_min_gen(D, use_queue)
    rcols = [tuple((r, v) for r, v in col if r < m1) for col in S.columns]
    R = GradedMatrix(Gamma.col_grades, S.col_grades, rcols, p)
    return Presentation(R)


def homology_presentation(c, degree: int, field: int = 2,
                          use_queue: bool = True) -> Presentation:
    """Presentation of H_degree of a bifiltered complex, in the complex's raw
    grades: generators are minimal cycle generators, relations the boundaries
    of (degree+1)-simplices lifted through the cycle basis."""
    from ..filtration import boundary_matrices

    if degree < 0:
        raise ValueError("degree must be >= 0")
    if degree == 0:
        _, d1 = boundary_matrices(c, 0, field)
        return Presentation(d1)
    if degree + 1 > c.max_dim:
        raise ValueError("complex skeleton insufficient: need max_dim >= degree+1")
    if c.params > 2:
        raise ValueError("homology presentations beyond degree 0 support "
                         "<= 2 parameters")
    d_r, d_r1 = boundary_matrices(c, degree, field)
    ker = _KernelState(d_r, use_queue)
    gen_grades = np.array([grade for _, grade in ker.gens],
                          dtype=np.float64).reshape(len(ker.gens), c.params)
    lams = ker.lift(d_r1.columns, d_r1.col_grades)
    M = GradedMatrix(gen_grades, d_r1.col_grades, lams, field)
    return Presentation(M)


def smoothed_presentation(c, degree: int, field: int = 2,
                          use_queue: bool = True) -> Presentation:
    """Presentation of the scale-smoothed estimator: the image in homology of
    the inclusion of the filtration into its horizontal doubling, indexed so
    that grade (delta, x) reads off im(H(at scale delta) -> H(at 2*delta)).

    Degree 0 uses the single-filtration shortcut (components never appear
    when the scale doubles, so the image equals the coarser module).
    """
    if degree == 0:
        return homology_presentation(c, 0, field).rescaled_first(0.5)
    ups = minimize(homology_presentation(c, degree, field, use_queue))
    uh = ups.matrix.rescaled_first(0.5)
    k = uh.nrows
    gamma_cols = uh.row_grades.copy()
    gamma_cols[:, 0] *= 2.0
    gamma = GradedMatrix(uh.row_grades, gamma_cols,
                         [((i, 1),) for i in range(k)], field, validate=False)
    return minimize(image_presentation(gamma, uh, use_queue))


def minimize(P: Presentation, use_queue: bool = True) -> Presentation:
    """Minimal presentation of the same module: cancels generator/relation
    pairs at equal grades, then drops relations generated by earlier ones."""
    M = P.matrix
    if M.params > 2:
        raise ValueError("minimize supports <= 2 parameters")
    p = M.field
    nr, nc = M.nrows, M.ncols
    if M.params == 1:
        row_order = np.lexsort((np.arange(nr), M.row_grades[:, 0]))
        col_order = np.lexsort((np.arange(nc), M.col_grades[:, 0]))
    else:
        row_order = np.lexsort((np.arange(nr), M.row_grades[:, 0], M.row_grades[:, 1]))
        col_order = np.lexsort((np.arange(nc), M.col_grades[:, 0], M.col_grades[:, 1]))
    inv_row = np.empty(nr, dtype=np.int64)
    inv_row[row_order] = np.arange(nr)
    rg = M.row_grades[row_order]
    cg = M.col_grades[col_order]
    row_keys = [_colex_key(g) for g in rg]
    cols = [sorted((int(inv_row[r]), v) for r, v in M.columns[j]) for j in col_order]

    row_lo, row_hi = [], []
    for j in range(nc):
        key = _colex_key(cg[j])
        row_lo.append(bisect_left(row_keys, key))
        row_hi.append(bisect_right(row_keys, key))

    if p == 2:
        pairs, survivors = backend.local_minimize_f2(
            [[r for r, _ in col] for col in cols], row_lo, row_hi, nr)
        survivors = [(j, [(r, 1) for r in col]) for j, col in survivors]
    else:
        pairs, survivors = engine_py.local_minimize_gf(
            [{r: v for r, v in col} for col in cols], row_lo, row_hi, p)
        survivors = [(j, sorted(col.items())) for j, col in survivors]

    paired_rows = {r for r, _ in pairs}
    kept_rows = [i for i in range(nr) if i not in paired_rows]
    row_map = {r: i for i, r in enumerate(kept_rows)}
    out_rg = rg[kept_rows] if kept_rows else rg[:0]

    # drop empty relations, then relations generated at smaller-or-equal grades
    cand = [(j, [(row_map[r], v) for r, v in col]) for j, col in survivors if col]
    if cand:
        cand_g = cg[[j for j, _ in cand]]
        order2, levels2, n_levels2, _ = _sweep_setup(cand_g)
        if p == 2:
            _, _, first = backend.sweep_f2(
                [[r for r, _ in cand[j][1]] for j in order2],
                levels2.tolist(), n_levels2, use_queue)
        else:
            _, _, first = engine_py.sweep_gf(
                [{r: v for r, v in cand[j][1]} for j in order2],
                levels2.tolist(), n_levels2, p, use_queue)
        keep_pos = sorted(pos for pos, f in zip(order2, first) if not f)
        kept_cols = [cand[pos] for pos in keep_pos]
    else:
        kept_cols = []

    out_cg = (cg[[j for j, _ in kept_cols]] if kept_cols
              else cg[:0])
    out_cols = [tuple(col) for _, col in kept_cols]
    return Presentation(GradedMatrix(out_rg, out_cg, out_cols, p), dict(P.meta))


def betti_numbers(P: Presentation):
    """Multigraded Betti numbers (beta_0, beta_1, beta_2) as grade multisets."""
    if P.params > 2:
        raise ValueError("Betti numbers supported for <= 2 parameters")
    def tuples(arr):
        return sorted((tuple(float(x) for x in g) for g in arr), key=_colex_key)

    Pm = minimize(P)
    b0 = tuples(Pm.matrix.row_grades)
    b1 = tuples(Pm.matrix.col_grades)
    b2 = tuples(ker_min_gen(Pm.matrix).col_grades) if Pm.matrix.ncols else []
    return b0, b1, b2


def hilbert_function(P: Presentation, queries) -> list:
    """Pointwise dimension of the presented module at each query grade."""
    M = P.matrix
    out = []
    for z in queries:
        zarr = np.asarray(z, dtype=np.float64)
        rmask = np.all(M.row_grades <= zarr, axis=1)
        cmask = np.all(M.col_grades <= zarr, axis=1)
        n_sel = int(rmask.sum())
        if n_sel == 0:
            out.append(0)
            continue
        row_map = np.full(M.nrows, -1, dtype=np.int64)
        row_map[np.nonzero(rmask)[0]] = np.arange(n_sel)
        sel = [M.columns[j] for j in np.nonzero(cmask)[0]]
        if M.field == 2:
            rank = backend.rank_f2(
                [[int(row_map[r]) for r, _ in col] for col in sel], n_sel)
        else:
            rank = engine_py.rank_gf(
                [{int(row_map[r]): v for r, v in col} for col in sel], M.field)
        out.append(n_sel - rank)
    return out
