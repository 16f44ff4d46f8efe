"""Brute-force oracles: plain (ungraded) linear algebra over F_p.

Everything here is written independently of the reduction engine on purpose;
these routines are the reference side of the dual-route checks (pointwise
image ranks, dense rank, component counts) and stay deliberately naive.
"""

from __future__ import annotations

import numpy as np

__all__ = ["dense_rank_gf", "dense_nullspace_gf", "pointwise_image_rank",
           "component_count_at"]


def _rref_gf(A: np.ndarray, p: int):
    """Row-reduce a copy of A over F_p; returns (rref, pivot column list)."""
    A = np.array(A, dtype=np.int64) % p
    nr, nc = A.shape
    piv_cols = []
    row = 0
    for col in range(nc):
        sel = None
        for i in range(row, nr):
            if A[i, col] % p:
                sel = i
                break
        if sel is None:
            continue
        A[[row, sel]] = A[[sel, row]]
        inv = pow(int(A[row, col]), p - 2, p)
        A[row] = (A[row] * inv) % p
        for i in range(nr):
            if i != row and A[i, col]:
                A[i] = (A[i] - A[i, col] * A[row]) % p
        piv_cols.append(col)
        row += 1
        if row == nr:
            break
    return A, piv_cols


def dense_rank_gf(A: np.ndarray, p: int = 2) -> int:
    if A.size == 0:
        return 0
    return len(_rref_gf(A, p)[1])


def dense_nullspace_gf(A: np.ndarray, p: int = 2) -> np.ndarray:
    """Columns form a basis of ker(A) over F_p; shape (ncols, nullity)."""
    nr, nc = A.shape
    if nc == 0:
        return np.zeros((0, 0), dtype=np.int64)
    if nr == 0:
        return np.eye(nc, dtype=np.int64)
    R, piv = _rref_gf(A, p)
    free = [c for c in range(nc) if c not in piv]
    basis = np.zeros((nc, len(free)), dtype=np.int64)
    for k, fc in enumerate(free):
        basis[fc, k] = 1
        for r, pc in enumerate(piv):
            basis[pc, k] = (-R[r, fc]) % p
    return basis


def _boundary_dense(simp_lo, simp_hi, p: int) -> np.ndarray:
    """Dense boundary matrix from (dim r-1) simplices to (dim r) simplices,
    alternating signs on sorted-vertex faces."""
    index = {tuple(s): i for i, s in enumerate(simp_lo)}
    A = np.zeros((len(simp_lo), len(simp_hi)), dtype=np.int64)
    for j, s in enumerate(simp_hi):
        for k in range(len(s)):
            face = tuple(s[:k] + s[k + 1:])
            A[index[face], j] = (-1) ** k % p
    return A


def _simplices_at(c, dim: int, grade) -> list:
    z = np.asarray(grade, dtype=np.float64)
    if dim > c.max_dim or c.n_simplices(dim) == 0:
        return []
    keep = np.all(c.grades[dim] <= z, axis=1)
    return [tuple(int(v) for v in row) for row in c.verts[dim][keep]]


def pointwise_image_rank(c, degree: int, grade, field: int = 2) -> int:
    """Rank of H_degree(sublevel complex at (delta, x)) -> H_degree(at (2*delta, x)).

    Both complexes are materialized as plain simplicial complexes and the rank
    of the induced map is computed as dim(Z1 + B2) - dim(B2) inside the chain
    space of the larger complex.
    """
    grade = np.asarray(grade, dtype=np.float64)
    g2 = grade.copy()
    g2[0] *= 2.0
    if degree + 1 > c.max_dim:
        raise ValueError("complex skeleton insufficient for the requested degree")

    r_lo1 = _simplices_at(c, degree - 1, grade) if degree > 0 else []
    r_mid1 = _simplices_at(c, degree, grade)
    r_mid2 = _simplices_at(c, degree, g2)
    r_hi2 = _simplices_at(c, degree + 1, g2)
    if not r_mid1:
        return 0

    pos2 = {s: i for i, s in enumerate(r_mid2)}
    n2 = len(r_mid2)

    # cycles of the small complex, written in the chain basis of the large one
    if degree == 0:
        z1 = np.zeros((n2, len(r_mid1)), dtype=np.int64)
        for j, s in enumerate(r_mid1):
            z1[pos2[s], j] = 1
    else:
        d_small = _boundary_dense(r_lo1, r_mid1, field)
        null = dense_nullspace_gf(d_small, field)
        z1 = np.zeros((n2, null.shape[1]), dtype=np.int64)
        for j_small, s in enumerate(r_mid1):
            z1[pos2[s]] = null[j_small]

    b2 = _boundary_dense(r_mid2, r_hi2, field) if r_hi2 else \
        np.zeros((n2, 0), dtype=np.int64)

    rank_b = dense_rank_gf(b2, field)
    rank_zb = dense_rank_gf(np.hstack([z1, b2]), field)
    return rank_zb - rank_b


def component_count_at(c, grade) -> int:
    """Number of connected components of the sublevel complex at `grade`,
    via a plain union-find over its vertices and edges."""
    verts = _simplices_at(c, 0, grade)
    edges = _simplices_at(c, 1, grade)
    parent = {v[0]: v[0] for v in verts}

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    comp = len(parent)
    for u, v in edges:
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            comp -= 1
    return comp
