# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled union-find kernels (see ``_pykernel`` for the reference version)."""
import numpy as np
cimport numpy as cnp

ctypedef cnp.int64_t i64


cdef inline i64 _find(i64[::1] parent, i64 x) noexcept nogil:
    cdef i64 root = x
    cdef i64 nxt
    while parent[root] != root:
        root = parent[root]
    while parent[x] != root:
        nxt = parent[x]
        parent[x] = root
        x = nxt
    return root


def partition(Py_ssize_t n, left, right):
    cdef i64[::1] lv = np.ascontiguousarray(left, dtype=np.int64)
    cdef i64[::1] rv = np.ascontiguousarray(right, dtype=np.int64)
    if lv.shape[0] != rv.shape[0]:
        raise ValueError("pair arrays differ in length")
    parent_arr = np.arange(n, dtype=np.int64)
    rank_arr = np.zeros(n, dtype=np.int64)
    out = np.empty(n, dtype=np.int64)
    first = np.full(n, -1, dtype=np.int64)
    cdef i64[::1] parent = parent_arr
    cdef i64[::1] rank = rank_arr
    cdef i64[::1] labels = out
    cdef i64[::1] seen = first
    cdef Py_ssize_t i, m = lv.shape[0]
    cdef i64 a, b, ra, rb, r, count = 0
    with nogil:
        for i in range(m):
            a = lv[i]
            b = rv[i]
            if a < 0 or a >= n or b < 0 or b >= n:
                with gil:
                    raise IndexError("pair member out of range")
            ra = _find(parent, a)
            rb = _find(parent, b)
            if ra == rb:
                continue
            if rank[ra] < rank[rb]:
                ra, rb = rb, ra
            elif rank[ra] == rank[rb]:
                rank[ra] += 1
            parent[rb] = ra
        for i in range(n):
            r = _find(parent, i)
            if seen[r] < 0:
                seen[r] = count
                count += 1
            labels[i] = seen[r]
    return out


def touching_pairs(owner, labels, Py_ssize_t n_labels):
    cdef i64[::1] ov = np.ascontiguousarray(owner, dtype=np.int64)
    cdef i64[::1] lv = np.ascontiguousarray(labels, dtype=np.int64)
    cdef Py_ssize_t n = ov.shape[0]
    if lv.shape[0] != n:
        raise ValueError("owner and label arrays differ in length")
    keep = np.asarray(ov) >= 0
    idx = np.nonzero(keep)[0]
    if idx.shape[0] == 0:
        return np.empty(0, dtype=np.int64), np.empty(0, dtype=np.int64)
    cdef i64 width = int(np.asarray(ov)[idx].max()) + 1
    # (label, owner) pairs, deduplicated and sorted through a 1-D key
    keys = np.unique(np.asarray(lv)[idx] * width + np.asarray(ov)[idx])
    pairs = np.stack([keys // width, keys % width], axis=1)
    cdef i64[:, ::1] pv = np.ascontiguousarray(pairs)
    cdef Py_ssize_t m = pv.shape[0]
    cdef Py_ssize_t start = 0, stop, i, j, total = 0
    # first pass: count pairs per label group
    while start < m:
        stop = start + 1
        while stop < m and pv[stop, 0] == pv[start, 0]:
            stop += 1
        total += (stop - start) * (stop - start - 1) // 2
        start = stop
    us_arr = np.empty(total, dtype=np.int64)
    vs_arr = np.empty(total, dtype=np.int64)
    cdef i64[::1] us = us_arr
    cdef i64[::1] vs = vs_arr
    cdef Py_ssize_t k = 0
    start = 0
    while start < m:
        stop = start + 1
        while stop < m and pv[stop, 0] == pv[start, 0]:
            stop += 1
        for i in range(start, stop):
            for j in range(i + 1, stop):
                us[k] = pv[i, 1]
                vs[k] = pv[j, 1]
                k += 1
        start = stop
    if total == 0:
        return us_arr, vs_arr
    ekeys = np.unique(us_arr * width + vs_arr)
    return ekeys // width, ekeys % width
