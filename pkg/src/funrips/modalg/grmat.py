"""Graded matrices over a prime field and free presentations.

A GradedMatrix carries one grade (a point of R^m) per row and per column;
an entry at (i, j) is only legal when row_grades[i] <= col_grades[j] in the
product order, which every constructor asserts.  Columns are stored sparsely
as tuples of (row, value) with rows strictly increasing; over F2 all values
are 1.  Grades are float64 and compared exactly (no epsilon fuzzing).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

__all__ = ["GradedMatrix", "Presentation", "pres_dumps", "pres_loads",
           "save_presentation", "load_presentation"]


def _as_grades(g, m=None):
    arr = np.asarray(g, dtype=np.float64)
    if arr.ndim == 2:
        return arr
    if arr.ndim == 1:
        if arr.size == 0:
            return arr.reshape(0, m if m else 1)
        return arr.reshape(-1, 1) if m in (None, 1) else arr.reshape(1, -1)
    raise ValueError("grades must be a 1- or 2-dimensional array")


class GradedMatrix:
    """Sparse matrix over F_p with graded rows and columns."""

    __slots__ = ("row_grades", "col_grades", "columns", "field")

    def __init__(self, row_grades, col_grades, columns, field=2, params=None,
                 validate=True):
        self.row_grades = _as_grades(row_grades, params)
        self.col_grades = _as_grades(col_grades, params or self.row_grades.shape[1])
        if self.row_grades.shape[1] != self.col_grades.shape[1]:
            raise ValueError("row and column grades have different dimensions")
        self.field = int(field)
        if validate:
            self.columns = [tuple((int(r), int(v) % self.field) for r, v in col)
                            for col in columns]
            self._check()
        else:
            self.columns = columns if isinstance(columns, list) else list(columns)

    def _check(self):
        if self.field < 2:
            raise ValueError("field must be a prime >= 2")
        nr = self.nrows
        rows, cols, vals = [], [], []
        for j, col in enumerate(self.columns):
            last = -1
            for r, v in col:
                if r <= last:
                    raise ValueError(f"column {j} rows not strictly increasing")
                last = r
                rows.append(r)
                cols.append(j)
                vals.append(v)
        if not rows:
            return
        rows = np.asarray(rows)
        cols = np.asarray(cols)
        vals = np.asarray(vals)
        if rows.min() < 0 or rows.max() >= nr:
            raise ValueError("row index out of range")
        if vals.min() < 1 or vals.max() >= self.field:
            raise ValueError(f"entry value outside F_{self.field}*")
        if not np.all(self.row_grades[rows] <= self.col_grades[cols]):
            bad = np.argmax(~np.all(self.row_grades[rows] <= self.col_grades[cols], axis=1))
            raise ValueError(
                f"entry ({rows[bad]},{cols[bad]}) violates grading: "
                f"{self.row_grades[rows[bad]]} !<= {self.col_grades[cols[bad]]}")

    @property
    def nrows(self) -> int:
        return self.row_grades.shape[0]

    @property
    def ncols(self) -> int:
        return self.col_grades.shape[0]

    @property
    def params(self) -> int:
        return self.row_grades.shape[1]

    def rows_of(self, j):
        return [r for r, _ in self.columns[j]]

    def dense(self) -> np.ndarray:
        out = np.zeros((self.nrows, self.ncols), dtype=np.int64)
        for j, col in enumerate(self.columns):
            for r, v in col:
                out[r, j] = v
        return out

    def rescaled_first(self, factor: float) -> "GradedMatrix":
        rg = self.row_grades.copy()
        cg = self.col_grades.copy()
        rg[:, 0] *= factor
        cg[:, 0] *= factor
        return GradedMatrix(rg, cg, self.columns, self.field, validate=False)

    def __eq__(self, other):
        return (isinstance(other, GradedMatrix)
                and self.field == other.field
                and np.array_equal(self.row_grades, other.row_grades)
                and np.array_equal(self.col_grades, other.col_grades)
                and self.columns == other.columns)

    def __repr__(self):
        return (f"GradedMatrix({self.nrows}x{self.ncols}, params={self.params}, "
                f"F_{self.field})")


@dataclass
class Presentation:
    """Free presentation: rows are generators, columns relations, module = coker."""

    matrix: GradedMatrix
    meta: dict = field(default_factory=dict)

    @property
    def params(self) -> int:
        return self.matrix.params

    @property
    def field(self) -> int:
        return self.matrix.field

    @property
    def n_generators(self) -> int:
        return self.matrix.nrows

    @property
    def n_relations(self) -> int:
        return self.matrix.ncols

    def rescaled_first(self, factor: float) -> "Presentation":
        return Presentation(self.matrix.rescaled_first(factor), dict(self.meta))


def _fmt(x: float) -> str:
    return repr(float(x))


def pres_dumps(P: Presentation) -> str:
    """Serialize to the PRES v1 text format (lossless round-trip)."""
    M = P.matrix
    lines = [f"pres 1", f"field {M.field}", f"params {M.params}", f"rows {M.nrows}"]
    for i in range(M.nrows):
        lines.append(" ".join(_fmt(x) for x in M.row_grades[i]))
    lines.append(f"cols {M.ncols}")
    for j in range(M.ncols):
        g = " ".join(_fmt(x) for x in M.col_grades[j])
        ent = " ".join(f"{r}:{v}" for r, v in M.columns[j])
        lines.append(f"{g} ;" + (f" {ent}" if ent else ""))
    return "\n".join(lines) + "\n"


def pres_loads(text: str) -> Presentation:
    lines = [ln for ln in text.splitlines()]
    if not lines or lines[0].strip() != "pres 1":
        raise ValueError("not a PRES v1 file")
    try:
        fieldp = int(lines[1].split()[1])
        params = int(lines[2].split()[1])
        nrows = int(lines[3].split()[1])
        pos = 4
        row_grades = []
        for _ in range(nrows):
            row_grades.append([float(x) for x in lines[pos].split()])
            pos += 1
        ncols = int(lines[pos].split()[1])
        pos += 1
        col_grades, columns = [], []
        for _ in range(ncols):
            head, _, tail = lines[pos].partition(";")
            col_grades.append([float(x) for x in head.split()])
            col = []
            for tok in tail.split():
                r, v = tok.split(":")
                col.append((int(r), int(v)))
            columns.append(col)
            pos += 1
    except (IndexError, ValueError) as exc:
        raise ValueError(f"malformed PRES v1 file: {exc}") from exc
    rg = np.asarray(row_grades, dtype=np.float64).reshape(nrows, params)
    cg = np.asarray(col_grades, dtype=np.float64).reshape(ncols, params)
    return Presentation(GradedMatrix(rg, cg, columns, fieldp))


def save_presentation(P: Presentation, path) -> None:
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(pres_dumps(P))


def load_presentation(path) -> Presentation:
    with open(path, "r", encoding="utf-8") as fh:
        return pres_loads(fh.read())
