# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
# distutils: language = c++
"""Compiled kernels. Contracts mirror :mod:`sepchk._pykernels` exactly."""

import numpy as np
cimport numpy as cnp
from libc.stdint cimport uint64_t, int32_t, int64_t
from libcpp.vector cimport vector

cnp.import_array()


def rref(words, Py_ssize_t ncols, Py_ssize_t pivot_limit=-1):
    cdef cnp.ndarray[cnp.uint64_t, ndim=2] arr = np.array(words, dtype=np.uint64, copy=True, order="C")
    cdef uint64_t[:, ::1] m = arr
    cdef Py_ssize_t nrows = m.shape[0]
    cdef Py_ssize_t nwords = m.shape[1]
    cdef Py_ssize_t prow = 0, col, w, r, i, k
    cdef uint64_t bit, tmp
    cdef Py_ssize_t limit = ncols if pivot_limit < 0 else min(pivot_limit, ncols)
    pivots = []
    for col in range(limit):
        if prow >= nrows:
            break
        w = col >> 6
        bit = (<uint64_t>1) << (col & 63)
        r = -1
        for i in range(prow, nrows):
            if m[i, w] & bit:
                r = i
                break
        if r < 0:
            continue
        if r != prow:
            for k in range(w, nwords):
                tmp = m[r, k]
                m[r, k] = m[prow, k]
                m[prow, k] = tmp
        for i in range(nrows):
            if i != prow and (m[i, w] & bit):
                for k in range(w, nwords):
                    m[i, k] ^= m[prow, k]
        pivots.append(col)
        prow += 1
    return arr, pivots


cdef void _symdiff(vector[int]& a, vector[int]& b, vector[int]& out):
    cdef size_t i = 0, j = 0
    out.clear()
    while i < a.size() and j < b.size():
        if a[i] < b[j]:
            out.push_back(a[i]); i += 1
        elif a[i] > b[j]:
            out.push_back(b[j]); j += 1
        else:
            i += 1; j += 1
    while i < a.size():
        out.push_back(a[i]); i += 1
    while j < b.size():
        out.push_back(b[j]); j += 1


def sparse_rank(columns, Py_ssize_t nrows):
    cdef vector[vector[int]] reduced
    cdef vector[int] pivot_of = vector[int](nrows, -1)
    cdef vector[int] cur, tmp
    cdef int low, other
    cdef Py_ssize_t rank = 0
    for col in columns:
        cur.clear()
        for r in sorted(set(int(x) for x in col)):
            cur.push_back(r)
        while cur.size() > 0:
            low = cur.back()
            other = pivot_of[low]
            if other < 0:
                pivot_of[low] = <int>reduced.size()
                reduced.push_back(cur)
                rank += 1
                break
            _symdiff(cur, reduced[other], tmp)
            cur.swap(tmp)
    return rank


cdef Py_ssize_t _find(int64_t[::1] parent, Py_ssize_t a):
    cdef Py_ssize_t root = a
    while parent[root] != root:
        root = parent[root]
    while parent[a] != root:
        parent[a], a = root, parent[a]
    return root


cdef void _union(int64_t[::1] parent, Py_ssize_t a, Py_ssize_t b):
    cdef Py_ssize_t ra = _find(parent, a), rb = _find(parent, b)
    if ra < rb:
        parent[rb] = ra
    elif rb < ra:
        parent[ra] = rb


def label_components(occ):
    shape = occ.shape
    cdef cnp.ndarray[cnp.uint8_t, ndim=1] flat_arr = np.ascontiguousarray(occ, dtype=np.uint8).ravel()
    cdef unsigned char[::1] flat = flat_arr
    cdef Py_ssize_t n = flat.shape[0]
    cdef Py_ssize_t ndim = len(shape)
    cdef int64_t[::1] dims = np.array(shape, dtype=np.int64)
    cdef int64_t[::1] strides = np.array(
        [int(np.prod(shape[k + 1:], dtype=np.int64)) for k in range(ndim)], dtype=np.int64)
    cdef int64_t[::1] parent = np.arange(n + 1, dtype=np.int64)
    cdef Py_ssize_t inf = n, idx, rem, k, c
    cdef bint boundary
    for idx in range(n):
        if flat[idx]:
            continue
        rem = idx
        boundary = False
        for k in range(ndim):
            c = rem // strides[k]
            rem -= c * strides[k]
            if c == 0 or c == dims[k] - 1:
                boundary = True
            if c > 0 and not flat[idx - strides[k]]:
                _union(parent, idx, idx - strides[k])
        if boundary:
            _union(parent, idx, inf)

    cdef cnp.ndarray[cnp.int32_t, ndim=1] labels_arr = np.full(n, -1, dtype=np.int32)
    cdef int32_t[::1] labels = labels_arr
    cdef int64_t[::1] ids = np.full(n + 1, -1, dtype=np.int64)
    cdef Py_ssize_t count = 1, root
    ids[_find(parent, inf)] = 0
    for idx in range(n):
        if flat[idx]:
            continue
        root = _find(parent, idx)
        if ids[root] < 0:
            ids[root] = count
            count += 1
        labels[idx] = <int32_t>ids[root]
    return labels_arr.reshape(shape), count
