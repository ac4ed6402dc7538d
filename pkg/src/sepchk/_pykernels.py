"""Pure-Python kernels. Same contracts as the compiled ``_kernels`` module.

Rows and sparse columns are held as Python integers used as bitsets, so the
inner XORs still run in C even without the extension.
"""

from __future__ import annotations

import numpy as np


def _row_to_int(row: np.ndarray) -> int:
    return int.from_bytes(row.tobytes(), "little")


def _int_to_row(value: int, nwords: int) -> np.ndarray:
    return np.frombuffer(value.to_bytes(8 * nwords, "little"), dtype="<u8").copy()


def rref(words: np.ndarray, ncols: int, pivot_limit: int = -1) -> tuple[np.ndarray, list[int]]:
    """Reduced row echelon form of a packed GF(2) matrix.

    Pivots are searched only in columns ``< pivot_limit`` (all columns when
    negative). Returns a new packed array whose first ``len(pivots)`` rows are
    the pivot rows in increasing pivot column; every later row is zero on the
    pivot-eligible columns.
    """
    nrows, nwords = words.shape
    limit = ncols if pivot_limit < 0 else min(pivot_limit, ncols)
    basis: dict[int, int] = {}
    leftover: list[int] = []
    for i in range(nrows):
        v = _row_to_int(words[i])
        while v:
            low = (v & -v).bit_length() - 1
            if low >= limit:
                leftover.append(v)
                break
            r = basis.get(low)
            if r is None:
                basis[low] = v
                break
            v ^= r
    pivots = sorted(basis)
    # back substitution, highest pivot first
    for idx in range(len(pivots) - 1, -1, -1):
        p = pivots[idx]
        row_p = basis[p]
        bit = 1 << p
        for q in pivots[:idx]:
            if basis[q] & bit:
                basis[q] ^= row_p
    out = np.zeros((nrows, nwords), dtype=np.uint64)
    for k, p in enumerate(pivots):
        out[k] = _int_to_row(basis[p], nwords)
    for k, v in enumerate(leftover, start=len(pivots)):
        out[k] = _int_to_row(v, nwords)
    return out, pivots


def sparse_rank(columns: list, nrows: int) -> int:
    """Rank of a GF(2) matrix given as a list of sorted row-index columns."""
    pivot: dict[int, int] = {}
    rank = 0
    for col in columns:
        v = 0
        for r in col:
            v |= 1 << int(r)
        while v:
            low = v.bit_length() - 1
            other = pivot.get(low)
            if other is None:
                pivot[low] = v
                rank += 1
                break
            v ^= other
    return rank


def label_components(occ: np.ndarray) -> tuple[np.ndarray, int]:
    """Face-adjacent labeling of the unoccupied cells of an N-d grid.

    Unoccupied cells on the grid boundary join the exterior component, which
    always gets id 0. Other ids follow first appearance in C order.
    Occupied cells get -1.
    """
    shape = occ.shape
    flat = np.ascontiguousarray(occ, dtype=np.uint8).ravel()
    n = flat.size
    ndim = len(shape)
    strides = [int(np.prod(shape[k + 1:], dtype=np.int64)) for k in range(ndim)]
    parent = list(range(n + 1))
    inf = n

    def find(a: int) -> int:
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    def union(a: int, b: int) -> None:
        ra, rb = find(a), find(b)
        if ra != rb:
            if ra < rb:
                parent[rb] = ra
            else:
                parent[ra] = rb

    occ_list = flat.tolist()
    for idx in range(n):
        if occ_list[idx]:
            continue
        rem = idx
        boundary = False
        for k in range(ndim):
            c = rem // strides[k]
            rem -= c * strides[k]
            if c == 0 or c == shape[k] - 1:
                boundary = True
            if c > 0 and not occ_list[idx - strides[k]]:
                union(idx, idx - strides[k])
        if boundary:
            union(idx, inf)

    labels = [-1] * n
    ids = {find(inf): 0}
    for idx in range(n):
        if occ_list[idx]:
            continue
        root = find(idx)
        lab = ids.get(root)
        if lab is None:
            lab = len(ids)
            ids[root] = lab
        labels[idx] = lab
    return np.array(labels, dtype=np.int32).reshape(shape), len(ids)
