"""Engine selection: compiled core when importable, pure Python otherwise.

``FUNRIPS_BACKEND`` forces a choice: ``native`` (error if the extension is
missing), ``py``, or ``auto`` (default).  Only F2 kernels are compiled; odd
primes always run on the Python engine.
"""

from __future__ import annotations

import os

import numpy as np

from . import engine_py

try:
    from . import _core
except ImportError:
    _core = None

_choice = os.environ.get("FUNRIPS_BACKEND", "auto").lower()
if _choice == "native" and _core is None:
    raise ImportError("FUNRIPS_BACKEND=native but funrips.modalg._core is not built")
_use_native = _core is not None and _choice != "py"


def active_backend() -> str:
    return "native" if _use_native else "py"


def _to_csc(cols):
    indptr = np.zeros(len(cols) + 1, dtype=np.int64)
    for j, c in enumerate(cols):
        indptr[j + 1] = indptr[j] + len(c)
    data = np.empty(indptr[-1], dtype=np.uint32)
    for j, c in enumerate(cols):
        data[indptr[j]:indptr[j + 1]] = c
    return data, indptr


def _from_csc(data, indptr):
    return [data[indptr[j]:indptr[j + 1]].tolist() for j in range(len(indptr) - 1)]


def _mask(rows) -> int:
    m = 0
    for r in rows:
        m |= 1 << int(r)
    return m


def _unmask(m: int):
    out = []
    while m:
        low = m & -m
        out.append(low.bit_length() - 1)
        m ^= low
    return out


def sweep_f2(cols_rows, levels, n_levels, use_queue=True):
    """cols_rows: list of sorted row-index lists. Returns (slaves, death, first)
    with slaves as sorted column-index lists (None for live columns)."""
    if _use_native:
        data, indptr = _to_csc(cols_rows)
        sdata, sindptr, death, first = _core.sweep_f2(
            data, indptr, np.asarray(levels, dtype=np.int64), n_levels, use_queue)
        slaves = _from_csc(sdata, sindptr)
        death = death.tolist()
        return ([slaves[j] if death[j] >= 0 else None for j in range(len(slaves))],
                death, first.astype(bool).tolist())
    masks = [_mask(c) for c in cols_rows]
    slaves, death, first = engine_py.sweep_f2(masks, list(levels), n_levels, use_queue)
    return ([_unmask(s) if s is not None else None for s in slaves], death, first)


def lift_f2(slaves, pivots, targets, n_cols):
    """Express each target (sorted row lists over column space) in the slave basis."""
    if _use_native:
        sdata, sindptr = _to_csc(slaves)
        tdata, tindptr = _to_csc(targets)
        ldata, lindptr = _core.lift_f2(
            sdata, sindptr, np.asarray(pivots, dtype=np.int64), tdata, tindptr, n_cols)
        return _from_csc(ldata, lindptr)
    by_pivot = {p: _mask(s) for p, s in zip(pivots, slaves)}
    lams = engine_py.lift_f2(by_pivot, [_mask(t) for t in targets])
    return [_unmask(x) for x in lams]


def rank_f2(cols_rows, n_rows):
    if _use_native:
        data, indptr = _to_csc(cols_rows)
        return int(_core.rank_f2(data, indptr, n_rows))
    return engine_py.rank_f2([_mask(c) for c in cols_rows])


def pair_reduce_f2(cols_rows, n_rows):
    if _use_native:
        data, indptr = _to_csc(cols_rows)
        return _core.pair_reduce_f2(data, indptr, n_rows).tolist()
    return engine_py.pair_reduce_f2([_mask(c) for c in cols_rows])


def local_minimize_f2(cols_rows, row_lo, row_hi, n_rows):
    """Returns (pairs [(row, col)...], survivors [(col_index, sorted row list)...])."""
    if _use_native:
        data, indptr = _to_csc(cols_rows)
        pr, pc, si, sdata, sindptr = _core.local_minimize_f2(
            data, indptr,
            np.asarray(row_lo, dtype=np.int64), np.asarray(row_hi, dtype=np.int64), n_rows)
        surv_cols = _from_csc(sdata, sindptr)
        return (list(zip(pr.tolist(), pc.tolist())),
                list(zip(si.tolist(), surv_cols)))
    pairs, survivors = engine_py.local_minimize_f2(
        [_mask(c) for c in cols_rows], row_lo, row_hi)
    return pairs, [(j, _unmask(c)) for j, c in survivors]
