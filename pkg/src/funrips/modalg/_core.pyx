# cython: language_level=3, boundscheck=False, wraparound=False
# distutils: language = c++
"""Compiled reduction core: F2 columns as sorted uint32 index arrays.

Mirrors funrips.modalg.engine_py bit for bit (same processing order, same
pivot rule); only the column representation differs.  Matrices cross the
boundary in CSC-like form: a flat uint32 data array plus an int64 indptr.
"""

import numpy as np

from libcpp.vector cimport vector
from libcpp.queue cimport priority_queue

ctypedef unsigned int u32
ctypedef long long i64


cdef void xor_merge(vector[u32]& a, vector[u32]& b, vector[u32]& out) noexcept:
    cdef size_t i = 0, j = 0, na = a.size(), nb = b.size()
    out.clear()
    while i < na and j < nb:
        if a[i] < b[j]:
            out.push_back(a[i]); i += 1
        elif a[i] > b[j]:
            out.push_back(b[j]); j += 1
        else:
            i += 1; j += 1
    while i < na:
        out.push_back(a[i]); i += 1
    while j < nb:
        out.push_back(b[j]); j += 1


cdef void load_columns(const u32[::1] data, const i64[::1] indptr,
                       vector[vector[u32]]& cols) noexcept:
    cdef size_t n = indptr.shape[0] - 1
    cdef size_t j
    cdef i64 k
    cols.resize(n)
    for j in range(n):
        cols[j].reserve(indptr[j + 1] - indptr[j])
        for k in range(indptr[j], indptr[j + 1]):
            cols[j].push_back(data[k])


cdef object dump_columns(vector[vector[u32]]& cols):
    cdef size_t n = cols.size()
    cdef i64 total = 0
    cdef size_t j, k
    for j in range(n):
        total += cols[j].size()
    out_data = np.empty(total, dtype=np.uint32)
    out_indptr = np.empty(n + 1, dtype=np.int64)
    cdef u32[::1] d = out_data
    cdef i64[::1] ip = out_indptr
    cdef i64 pos = 0
    ip[0] = 0
    for j in range(n):
        for k in range(cols[j].size()):
            d[pos] = cols[j][k]
            pos += 1
        ip[j + 1] = pos
    return out_data, out_indptr


def sweep_f2(const u32[::1] data, const i64[::1] indptr,
             const i64[::1] levels, i64 n_levels, bint use_queue=True):
    """See engine_py.sweep_f2; returns (slave_data, slave_indptr, death_level, first_dead)."""
    cdef i64 n = indptr.shape[0] - 1
    cdef vector[vector[u32]] r
    cdef vector[vector[u32]] v
    cdef vector[u32] tmp
    load_columns(data, indptr, r)
    v.resize(n)
    cdef i64 j
    for j in range(n):
        v[j].push_back(<u32>j)

    death = np.full(n, -1, dtype=np.int64)
    first = np.zeros(n, dtype=np.uint8)
    cdef i64[::1] death_v = death
    cdef unsigned char[::1] first_v = first

    cdef vector[vector[i64]] by_level
    by_level.resize(n_levels)
    for j in range(n):
        by_level[levels[j]].push_back(j)

    cdef vector[i64] pivot_owner
    # pivot_owner indexed by row id; rows are < 2**32, use a dict-free dense
    # array sized to the max row index + 1
    cdef i64 max_row = -1
    cdef size_t t
    for t in range(<size_t>data.shape[0]):
        if data[t] > max_row:
            max_row = data[t]
    pivot_owner.assign(max_row + 2, -1)

    cdef priority_queue[i64] heap
    cdef i64 lev, k, p
    cdef vector[i64] active
    cdef vector[i64] merged
    cdef size_t ai, bi

    if use_queue:
        for lev in range(n_levels):
            for t in range(by_level[lev].size()):
                heap.push(-by_level[lev][t])
            while not heap.empty():
                j = -heap.top(); heap.pop()
                if death_v[j] >= 0:
                    continue
                while r[j].size() > 0:
                    p = r[j].back()
                    k = pivot_owner[p]
                    if k < 0 or k == j:
                        pivot_owner[p] = j
                        break
                    if k < j:
                        xor_merge(r[j], r[k], tmp); r[j].swap(tmp)
                        xor_merge(v[j], v[k], tmp); v[j].swap(tmp)
                    else:
                        pivot_owner[p] = j
                        heap.push(-k)
                        break
                if r[j].size() == 0:
                    death_v[j] = lev
                    if lev == levels[j]:
                        first_v[j] = 1
    else:
        for lev in range(n_levels):
            merged.clear()
            ai = 0; bi = 0
            while ai < active.size() and bi < by_level[lev].size():
                if active[ai] < by_level[lev][bi]:
                    merged.push_back(active[ai]); ai += 1
                else:
                    merged.push_back(by_level[lev][bi]); bi += 1
            while ai < active.size():
                merged.push_back(active[ai]); ai += 1
            while bi < by_level[lev].size():
                merged.push_back(by_level[lev][bi]); bi += 1
            active.swap(merged)
            for t in range(pivot_owner.size()):
                pivot_owner[t] = -1
            for t in range(active.size()):
                j = active[t]
                if death_v[j] >= 0:
                    continue
                while r[j].size() > 0:
                    p = r[j].back()
                    k = pivot_owner[p]
                    if k < 0:
                        pivot_owner[p] = j
                        break
                    xor_merge(r[j], r[k], tmp); r[j].swap(tmp)
                    xor_merge(v[j], v[k], tmp); v[j].swap(tmp)
                if r[j].size() == 0:
                    death_v[j] = lev
                    if lev == levels[j]:
                        first_v[j] = 1

    # blank the slaves of live columns so the dump only carries kernel data
    for j in range(n):
        if death_v[j] < 0:
            v[j].clear()
    slave_data, slave_indptr = dump_columns(v)
    return slave_data, slave_indptr, death, first


def lift_f2(const u32[::1] sdata, const i64[::1] sindptr,
            const i64[::1] pivot_of_slave,
            const u32[::1] tdata, const i64[::1] tindptr, i64 n_cols):
    """Back-substitute targets through slaves keyed by their pivot index."""
    cdef vector[vector[u32]] s
    cdef vector[vector[u32]] targ
    cdef vector[u32] tmp
    load_columns(sdata, sindptr, s)
    load_columns(tdata, tindptr, targ)
    cdef vector[i64] slave_at
    slave_at.assign(n_cols, -1)
    cdef i64 i, p
    for i in range(pivot_of_slave.shape[0]):
        slave_at[pivot_of_slave[i]] = i
    cdef size_t j
    cdef u32 swp
    cdef vector[vector[u32]] lams
    lams.resize(targ.size())
    for j in range(targ.size()):
        while targ[j].size() > 0:
            p = targ[j].back()
            i = slave_at[p]
            if i < 0:
                raise ValueError("column is not in the span of the kernel")
            xor_merge(targ[j], s[i], tmp); targ[j].swap(tmp)
            lams[j].push_back(<u32>p)
        # entries were appended in decreasing pivot order; re-sort ascending
        for i in range(<i64>lams[j].size() // 2):
            swp = lams[j][i]
            lams[j][i] = lams[j][lams[j].size() - 1 - i]
            lams[j][lams[j].size() - 1 - i] = swp
    lam_data, lam_indptr = dump_columns(lams)
    return lam_data, lam_indptr


def rank_f2(const u32[::1] data, const i64[::1] indptr, i64 n_rows):
    cdef vector[vector[u32]] cols
    cdef vector[u32] tmp
    load_columns(data, indptr, cols)
    cdef vector[i64] owner
    owner.assign(n_rows + 1, -1)
    cdef i64 rank = 0, p, k
    cdef size_t j
    for j in range(cols.size()):
        while cols[j].size() > 0:
            p = cols[j].back()
            k = owner[p]
            if k < 0:
                owner[p] = j
                rank += 1
                break
            xor_merge(cols[j], cols[<size_t>k], tmp); cols[j].swap(tmp)
    return rank


def pair_reduce_f2(const u32[::1] data, const i64[::1] indptr, i64 n_rows):
    cdef vector[vector[u32]] cols
    cdef vector[u32] tmp
    load_columns(data, indptr, cols)
    cdef vector[i64] owner
    owner.assign(n_rows + 1, -1)
    out = np.full(indptr.shape[0] - 1, -1, dtype=np.int64)
    cdef i64[::1] out_v = out
    cdef i64 p, k
    cdef size_t j
    for j in range(cols.size()):
        while cols[j].size() > 0:
            p = cols[j].back()
            k = owner[p]
            if k < 0:
                owner[p] = j
                out_v[j] = p
                break
            xor_merge(cols[j], cols[<size_t>k], tmp); cols[j].swap(tmp)
    return out


cdef i64 local_max(vector[u32]& col, i64 lo, i64 hi) noexcept:
    # entries are sorted; scan from the back for the last entry in [lo, hi)
    cdef i64 i = <i64>col.size() - 1
    while i >= 0:
        if col[i] < lo:
            return -1
        if col[i] < hi:
            return col[i]
        i -= 1
    return -1


def local_minimize_f2(const u32[::1] data, const i64[::1] indptr,
                      const i64[::1] row_lo, const i64[::1] row_hi, i64 n_rows):
    """See engine_py.local_minimize_f2; returns (pair_rows, pair_cols, surv_idx, surv csc)."""
    cdef i64 n = indptr.shape[0] - 1
    cdef vector[vector[u32]] r
    cdef vector[u32] tmp
    load_columns(data, indptr, r)
    cdef vector[i64] pair_of_row
    pair_of_row.assign(n_rows + 1, -1)
    cdef vector[i64] order_rows
    cdef vector[i64] order_cols
    cdef vector[char] paired_col
    paired_col.assign(n, 0)
    cdef i64 j, p, u, q
    for j in range(n):
        while True:
            p = local_max(r[j], row_lo[j], row_hi[j])
            if p < 0:
                break
            u = pair_of_row[p]
            if u < 0:
                pair_of_row[p] = j
                order_rows.push_back(p)
                order_cols.push_back(j)
                paired_col[j] = 1
                break
            xor_merge(r[j], r[u], tmp); r[j].swap(tmp)

    cdef vector[char] is_paired_row
    is_paired_row.assign(n_rows + 1, 0)
    cdef size_t t
    for t in range(order_rows.size()):
        is_paired_row[order_rows[t]] = 1

    cdef i64 it
    cdef i64 i
    for it in range(<i64>order_rows.size() - 1, -1, -1):
        p = order_rows[it]
        j = order_cols[it]
        while True:
            q = -1
            i = <i64>r[j].size() - 1
            while i >= 0:
                if is_paired_row[r[j][i]] and r[j][i] != <u32>p:
                    q = r[j][i]
                    break
                i -= 1
            if q < 0:
                break
            u = pair_of_row[q]
            xor_merge(r[j], r[<size_t>u], tmp); r[j].swap(tmp)

    cdef vector[vector[u32]] surv
    cdef vector[i64] surv_idx
    for j in range(n):
        if paired_col[j]:
            continue
        while True:
            q = -1
            i = <i64>r[j].size() - 1
            while i >= 0:
                if is_paired_row[r[j][i]]:
                    q = r[j][i]
                    break
                i -= 1
            if q < 0:
                break
            u = pair_of_row[q]
            xor_merge(r[j], r[<size_t>u], tmp); r[j].swap(tmp)
        surv_idx.push_back(j)
        surv.push_back(r[j])

    pr = np.empty(order_rows.size(), dtype=np.int64)
    pc = np.empty(order_cols.size(), dtype=np.int64)
    cdef i64[::1] pr_v = pr
    cdef i64[::1] pc_v = pc
    for t in range(order_rows.size()):
        pr_v[t] = order_rows[t]
        pc_v[t] = order_cols[t]
    si = np.empty(surv_idx.size(), dtype=np.int64)
    cdef i64[::1] si_v = si
    for t in range(surv_idx.size()):
        si_v[t] = surv_idx[t]
    sdata, sindptr = dump_columns(surv)
    return pr, pc, si, sdata, sindptr
