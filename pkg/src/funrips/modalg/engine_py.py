"""Pure-Python column-reduction engine.

Columns over F2 are Python integers used as bitmasks (bit i = row i), so
column addition is a single big-int XOR and the pivot is ``bit_length()-1``.
Columns over odd primes are dicts ``{row: value}``.

The central routine is :func:`sweep_f2`, a graded column reduction that
processes columns level by level (second grade coordinate) and, within the
availability order, in increasing first coordinate.  It returns, for every
column that reduces to zero, the recorded combination ("slave" column) that
witnesses the kernel element, together with the level at which it died.
Callers re-sort their columns so that list order equals the within-level
order; the slave combinations are then unit upper-triangular with respect
to list order, which is what makes :func:`lift_f2` a plain back-substitution.

Two scheduling strategies are provided: a per-level re-scan of the active
columns (simple, the reference behaviour) and a queue-based schedule that
only touches columns whose pivot situation actually changed.  Both produce
the same death grades; the queue is the default in the callers.
"""

from __future__ import annotations

import heapq


def _f2_pivot(col: int) -> int:
    return col.bit_length() - 1


def sweep_f2(cols, levels, n_levels, use_queue=True):
    """Graded reduction sweep over F2.

    Parameters
    ----------
    cols : list[int]
        Bitmask columns, pre-sorted by (first grade coordinate, tiebreak);
        list order is the reduction order within each level.
    levels : list[int]
        Level index (rank of the second grade coordinate) per column.
    n_levels : int
        Number of distinct levels.
    use_queue : bool
        Queue schedule (default) or per-level re-scan; identical output
        grades either way.

    Returns
    -------
    slaves : list[int | None]
        For every dead column, the bitmask over *column* indices recording
        the zero combination (own bit always set); None for live columns.
    death_level : list[int]
        Level at which the column died, -1 if it never died.
    first_dead : list[bool]
        True when the column died at its own level, i.e. it lies in the span
        of columns of component-wise smaller-or-equal grade.
    """
    n = len(cols)
    r = list(cols)
    v = [1 << j for j in range(n)]
    death_level = [-1] * n
    first_dead = [False] * n

    by_level = [[] for _ in range(n_levels)]
    for j, lev in enumerate(levels):
        by_level[lev].append(j)

    pivots = {}

    if use_queue:
        heap = []
        for lev in range(n_levels):
            for j in by_level[lev]:
                heapq.heappush(heap, j)
            while heap:
                j = heapq.heappop(heap)
                if death_level[j] >= 0:
                    continue
                cj, vj = r[j], v[j]
                while cj:
                    p = cj.bit_length() - 1
                    k = pivots.get(p)
                    if k is None or k == j:
                        pivots[p] = j
                        break
                    if k < j:
                        cj ^= r[k]
                        vj ^= v[k]
                    else:
                        # j wins the pivot slot; k must be re-reduced
                        pivots[p] = j
                        heapq.heappush(heap, k)
                        break
                r[j], v[j] = cj, vj
                if not cj:
                    death_level[j] = lev
                    if lev == levels[j]:
                        first_dead[j] = True
    else:
        active = []
        for lev in range(n_levels):
            active = sorted(active + by_level[lev])
            pivots = {}
            for j in active:
                if death_level[j] >= 0:
                    continue
                cj, vj = r[j], v[j]
                while cj:
                    p = cj.bit_length() - 1
                    k = pivots.get(p)
                    if k is None:
                        pivots[p] = j
                        break
                    cj ^= r[k]
                    vj ^= v[k]
                r[j], v[j] = cj, vj
                if not cj:
                    death_level[j] = lev
                    if lev == levels[j]:
                        first_dead[j] = True

    slaves = [v[j] if death_level[j] >= 0 else None for j in range(n)]
    return slaves, death_level, first_dead


def lift_f2(slave_by_pivot, targets):
    """Back-substitute targets through unit-triangular kernel slaves.

    slave_by_pivot maps a column index j (the pivot of a slave, its own
    highest bit) to the slave bitmask.  Every target must lie in the span;
    the returned bitmasks are supported on pivot indices.
    """
    out = []
    for t in targets:
        lam = 0
        while t:
            p = t.bit_length() - 1
            s = slave_by_pivot.get(p)
            if s is None:
                raise ValueError("column is not in the span of the kernel")
            t ^= s
            lam |= 1 << p
        out.append(lam)
    return out


def rank_f2(cols):
    """Rank of a set of bitmask columns."""
    pivots = {}
    rank = 0
    for c in cols:
        while c:
            p = c.bit_length() - 1
            k = pivots.get(p)
            if k is None:
                pivots[p] = c
                rank += 1
                break
            c ^= k
    return rank


def pair_reduce_f2(cols):
    """Standard persistence reduction; returns the pivot row per column (-1 if zero).

    Columns are processed in list order and reduced by earlier columns only,
    so the pivots define the usual pairing.
    """
    pivots = {}
    out = []
    for c in cols:
        while c:
            p = c.bit_length() - 1
            k = pivots.get(p)
            if k is None:
                pivots[p] = c
                break
            c ^= k
        out.append(c.bit_length() - 1 if c else -1)
    return out


def local_minimize_f2(cols, row_lo, row_hi):
    """Cancel generator/relation pairs carrying a unit entry at equal grades.

    cols are bitmasks over rows sorted so that rows with equal grade are
    contiguous; for column j the rows of its own grade occupy
    ``range(row_lo[j], row_hi[j])`` (empty range when no row shares the
    grade).  Columns must be pre-sorted in processing (colex) order.

    Returns (paired, survivors) where paired is a list of (row, col) pairs
    and survivors the list of unpaired column indices with their cleaned
    contents (paired rows eliminated).
    """
    n = len(cols)
    r = list(cols)
    pair_of_row = {}
    pair_order = []
    paired_col = [False] * n

    for j in range(n):
        lo, hi = row_lo[j], row_hi[j]
        cj = r[j]
        if lo < hi:
            mask = ((1 << (hi - lo)) - 1) << lo
            while True:
                local = cj & mask
                if not local:
                    break
                p = local.bit_length() - 1
                u = pair_of_row.get(p)
                if u is None:
                    pair_of_row[p] = j
                    pair_order.append((p, j))
                    paired_col[j] = True
                    break
                cj ^= r[u]
        r[j] = cj

    # eliminate paired rows from the pivot columns themselves, in reverse
    # pairing order (later pairs are already clean), then from survivors
    paired_mask = 0
    for p, _ in pair_order:
        paired_mask |= 1 << p
    for p, j in reversed(pair_order):
        cj = r[j]
        t = cj & paired_mask & ~(1 << p)
        while t:
            q = t.bit_length() - 1
            cj ^= r[pair_of_row[q]]
            t = cj & paired_mask & ~(1 << p)
        r[j] = cj
    survivors = []
    for j in range(n):
        if paired_col[j]:
            continue
        cj = r[j]
        t = cj & paired_mask
        while t:
            q = t.bit_length() - 1
            cj ^= r[pair_of_row[q]]
            t = cj & paired_mask
        survivors.append((j, cj))

    return pair_order, survivors


# ---------------------------------------------------------------------------
# Odd-prime variants: dict columns {row: value}, value in [1, p-1].

def _addmul_gf(target, source, scale, p):
    for row, val in source.items():
        s = (target.get(row, 0) + scale * val) % p
        if s:
            target[row] = s
        else:
            target.pop(row, None)


def sweep_gf(cols, levels, n_levels, p, use_queue=True):
    """Odd-prime analogue of :func:`sweep_f2` (dict columns)."""
    n = len(cols)
    r = [dict(c) for c in cols]
    v = [{j: 1} for j in range(n)]
    death_level = [-1] * n
    first_dead = [False] * n
    by_level = [[] for _ in range(n_levels)]
    for j, lev in enumerate(levels):
        by_level[lev].append(j)
    pivots = {}

    def process(j, lev, heap):
        cj, vj = r[j], v[j]
        while cj:
            piv = max(cj)
            k = pivots.get(piv)
            if k is None or k == j:
                pivots[piv] = j
                break
            if k < j or heap is None:
                scale = (-cj[piv] * pow(r[k][piv], p - 2, p)) % p
                _addmul_gf(cj, r[k], scale, p)
                _addmul_gf(vj, v[k], scale, p)
            else:
                pivots[piv] = j
                heapq.heappush(heap, k)
                break
        if not cj:
            death_level[j] = lev
            if lev == levels[j]:
                first_dead[j] = True

    if use_queue:
        heap = []
        for lev in range(n_levels):
            for j in by_level[lev]:
                heapq.heappush(heap, j)
            while heap:
                j = heapq.heappop(heap)
                if death_level[j] < 0:
                    process(j, lev, heap)
    else:
        active = []
        for lev in range(n_levels):
            active = sorted(active + by_level[lev])
            pivots = {}
            for j in active:
                if death_level[j] < 0:
                    process(j, lev, None)

    slaves = [v[j] if death_level[j] >= 0 else None for j in range(n)]
    return slaves, death_level, first_dead


def lift_gf(slave_by_pivot, targets, p):
    out = []
    for t in targets:
        t = dict(t)
        lam = {}
        while t:
            piv = max(t)
            s = slave_by_pivot.get(piv)
            if s is None:
                raise ValueError("column is not in the span of the kernel")
            scale = (-t[piv] * pow(s[piv], p - 2, p)) % p
            _addmul_gf(t, s, scale, p)
            lam[piv] = (-scale) % p
        out.append(lam)
    return out


def rank_gf(cols, p):
    pivots = {}
    rank = 0
    for c in cols:
        c = dict(c)
        while c:
            piv = max(c)
            k = pivots.get(piv)
            if k is None:
                pivots[piv] = c
                rank += 1
                break
            scale = (-c[piv] * pow(k[piv], p - 2, p)) % p
            _addmul_gf(c, k, scale, p)
    return rank


def pair_reduce_gf(cols, p):
    pivots = {}
    out = []
    for c in cols:
        c = dict(c)
        while c:
            piv = max(c)
            k = pivots.get(piv)
            if k is None:
                pivots[piv] = c
                break
            scale = (-c[piv] * pow(k[piv], p - 2, p)) % p
            _addmul_gf(c, k, scale, p)
        out.append(max(c) if c else -1)
    return out


def local_minimize_gf(cols, row_lo, row_hi, p):
    n = len(cols)
    r = [dict(c) for c in cols]
    pair_of_row = {}
    pair_order = []
    paired_col = [False] * n

    for j in range(n):
        lo, hi = row_lo[j], row_hi[j]
        cj = r[j]
        while True:
            local = [row for row in cj if lo <= row < hi]
            if not local:
                break
            piv = max(local)
            u = pair_of_row.get(piv)
            if u is None:
                pair_of_row[piv] = j
                pair_order.append((piv, j))
                paired_col[j] = True
                break
            scale = (-cj[piv] * pow(r[u][piv], p - 2, p)) % p
            _addmul_gf(cj, r[u], scale, p)

    paired_rows = set(pair_of_row)
    for piv, j in reversed(pair_order):
        cj = r[j]
        while True:
            t = [row for row in cj if row in paired_rows and row != piv]
            if not t:
                break
            q = max(t)
            u = pair_of_row[q]
            scale = (-cj[q] * pow(r[u][q], p - 2, p)) % p
            _addmul_gf(cj, r[u], scale, p)
    survivors = []
    for j in range(n):
        if paired_col[j]:
            continue
        cj = r[j]
        while True:
            t = [row for row in cj if row in paired_rows]
            if not t:
                break
            q = max(t)
            u = pair_of_row[q]
            scale = (-cj[q] * pow(r[u][q], p - 2, p)) % p
            _addmul_gf(cj, r[u], scale, p)
        survivors.append((j, cj))
    return pair_order, survivors
