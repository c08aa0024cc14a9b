# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled neighbor-search kernels.

Distance arithmetic (per-dimension fold, square, accumulate, sqrt) follows the
exact operation order of the NumPy fallback so both backends return
bit-identical results. All hot loops run without the GIL, so simulation trials
dispatched from a thread pool genuinely overlap.
"""

from libc.math cimport fabs, sqrt, INFINITY

import numpy as np

cimport numpy as cnp

cnp.import_array()

# DFS stack capacity; a median-split tree over <= 1e5 points is < 20 deep.
DEF STACK_CAP = 512


cdef inline double _pair_d2(const double* a, const double* b,
                            Py_ssize_t dims, bint wrap) noexcept nogil:
    cdef double d2 = 0.0
    cdef double delta
    cdef Py_ssize_t k
    for k in range(dims):
        delta = fabs(a[k] - b[k])
        if wrap and delta > 0.5:
            delta = 1.0 - delta
        d2 += delta * delta
    return d2


cdef inline double _pair_d2_capped(const double* a, const double* b,
                                   Py_ssize_t dims, bint wrap,
                                   double cap) noexcept nogil:
    # Early exit once the partial sum exceeds cap. The returned partial is
    # already > cap, so callers comparing against cap reject it exactly as
    # they would the full value; accepted pairs always complete the loop and
    # equal _pair_d2 bit for bit.
    cdef double d2 = 0.0
    cdef double delta
    cdef Py_ssize_t k
    for k in range(dims):
        delta = fabs(a[k] - b[k])
        if wrap and delta > 0.5:
            delta = 1.0 - delta
        d2 += delta * delta
        if d2 > cap:
            return d2
    return d2


cdef inline void _sift_down(double* heap, Py_ssize_t size, Py_ssize_t root) noexcept nogil:
    cdef Py_ssize_t child
    cdef double tmp
    while True:
        child = 2 * root + 1
        if child >= size:
            return
        if child + 1 < size and heap[child + 1] > heap[child]:
            child += 1
        if heap[child] <= heap[root]:
            return
        tmp = heap[root]
        heap[root] = heap[child]
        heap[child] = tmp
        root = child


cdef inline void _sift_up(double* heap, Py_ssize_t pos) noexcept nogil:
    cdef Py_ssize_t parent
    cdef double tmp
    while pos > 0:
        parent = (pos - 1) >> 1
        if heap[parent] >= heap[pos]:
            return
        tmp = heap[parent]
        heap[parent] = heap[pos]
        heap[pos] = tmp
        pos = parent


cdef inline void _heap_offer(double* heap, Py_ssize_t* size, Py_ssize_t cap,
                             double value) noexcept nogil:
    # Keep the cap smallest values seen so far (max-heap on squared distance).
    if size[0] < cap:
        heap[size[0]] = value
        size[0] += 1
        _sift_up(heap, size[0] - 1)
    elif value < heap[0]:
        heap[0] = value
        _sift_down(heap, size[0], 0)


cdef inline void _heap_drain_sorted(double* heap, Py_ssize_t size,
                                    double* row) noexcept nogil:
    # Pop the max repeatedly, writing sqrt(d2) back to front: row ends sorted
    # ascending, matching np.sort over the same multiset of values.
    cdef Py_ssize_t m = size
    cdef double top
    while m > 0:
        top = heap[0]
        m -= 1
        heap[0] = heap[m]
        _sift_down(heap, m, 0)
        row[m] = sqrt(top)


def brute_force_ranks(const double[:, ::1] points, Py_ssize_t max_rank, bint wrap):
    """Sorted distances to the max_rank nearest neighbors; O(N^2) scan."""
    cdef Py_ssize_t n = points.shape[0]
    cdef Py_ssize_t dims = points.shape[1]
    out_arr = np.empty((n, max_rank), dtype=np.float64)
    heap_arr = np.empty(max_rank, dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[::1] heap = heap_arr
    cdef Py_ssize_t i, j, hsize
    cdef double d2
    with nogil:
        for i in range(n):
            hsize = 0
            for j in range(n):
                if j == i:
                    continue
                d2 = _pair_d2(&points[i, 0], &points[j, 0], dims, wrap)
                _heap_offer(&heap[0], &hsize, max_rank, d2)
            _heap_drain_sorted(&heap[0], hsize, &out[i, 0])
    return out_arr


cdef inline double _box_bound2(const double* x, const double* lo, const double* hi,
                               Py_ssize_t dims, bint wrap, double cap) noexcept nogil:
    # Lower bound on squared distance from x to any point inside the box.
    # A partial sum over dimensions is itself a valid lower bound, so once it
    # exceeds cap (the current k-th best) the box is prunable and the loop
    # exits early.
    cdef double b2 = 0.0
    cdef double d, img
    cdef Py_ssize_t k
    for k in range(dims):
        if x[k] < lo[k]:
            d = lo[k] - x[k]
        elif x[k] > hi[k]:
            d = x[k] - hi[k]
        else:
            d = 0.0
        if wrap:
            img = (x[k] + 1.0) - hi[k]   # +1 image always right of the box
            if img < d:
                d = img
            img = (lo[k] + 1.0) - x[k]   # -1 image always left of the box
            if img < d:
                d = img
        b2 += d * d
        if b2 > cap:
            return b2
    return b2


def kdtree_ranks(const double[:, ::1] tree_points,
                 const cnp.int64_t[::1] tree_index,
                 const cnp.int64_t[::1] left,
                 const cnp.int64_t[::1] right,
                 const cnp.int64_t[::1] start,
                 const cnp.int64_t[::1] end,
                 const double[:, ::1] box_lo,
                 const double[:, ::1] box_hi,
                 Py_ssize_t max_rank, bint wrap):
    """kd-tree neighbor search over a tree built by kdtree.build_kdtree.

    Every tree point is queried; output row ``tree_index[p]`` holds the
    result for permuted row ``p``, i.e. rows follow the original point order.
    """
    cdef Py_ssize_t n = tree_points.shape[0]
    cdef Py_ssize_t dims = tree_points.shape[1]
    out_arr = np.empty((n, max_rank), dtype=np.float64)
    heap_arr = np.empty(max_rank, dtype=np.float64)
    stack_node_arr = np.empty(STACK_CAP, dtype=np.int64)
    stack_bound_arr = np.empty(STACK_CAP, dtype=np.float64)
    cdef double[:, ::1] out = out_arr
    cdef double[::1] heap = heap_arr
    cdef cnp.int64_t[::1] stack_node = stack_node_arr
    cdef double[::1] stack_bound = stack_bound_arr
    cdef Py_ssize_t q, p, top, hsize
    cdef cnp.int64_t node, child_l, child_r, s, e
    cdef double bound2, bl, br, d2, cap
    cdef const double* x
    cdef bint overflow = False
    with nogil:
        # Queries run in permuted (tree) order for cache locality; the query
        # point is then row q itself, so self-exclusion is just p == q (a
        # duplicate of the point sits in some other row and still counts).
        for q in range(n):
            x = &tree_points[q, 0]
            hsize = 0
            cap = INFINITY
            top = 0
            stack_node[0] = 0
            stack_bound[0] = 0.0
            top = 1
            while top > 0:
                top -= 1
                node = stack_node[top]
                bound2 = stack_bound[top]
                # Strict >: boxes tying the current k-th distance may still
                # hold equal values, never smaller ones.
                if hsize == max_rank and bound2 > heap[0]:
                    continue
                cap = heap[0] if hsize == max_rank else INFINITY
                child_l = left[node]
                if child_l < 0:
                    s = start[node]
                    e = end[node]
                    for p in range(s, e):
                        if p == q:
                            continue
                        d2 = _pair_d2_capped(x, &tree_points[p, 0], dims, wrap, cap)
                        _heap_offer(&heap[0], &hsize, max_rank, d2)
                        if hsize == max_rank:
                            cap = heap[0]
                else:
                    child_r = right[node]
                    bl = _box_bound2(x, &box_lo[child_l, 0], &box_hi[child_l, 0], dims, wrap, cap)
                    br = _box_bound2(x, &box_lo[child_r, 0], &box_hi[child_r, 0], dims, wrap, cap)
                    if top + 2 > STACK_CAP:
                        overflow = True
                        break
                    # Children already beyond the cap are dropped here; the
                    # cap only shrinks, so they could never survive the pop
                    # check either.
                    if bl <= br:  # push farther child first, pop nearer first
                        if br <= cap:
                            stack_node[top] = child_r
                            stack_bound[top] = br
                            top += 1
                        stack_node[top] = child_l
                        stack_bound[top] = bl
                        top += 1
                    else:
                        if bl <= cap:
                            stack_node[top] = child_l
                            stack_bound[top] = bl
                            top += 1
                        stack_node[top] = child_r
                        stack_bound[top] = br
                        top += 1
            if overflow:
                break
            _heap_drain_sorted(&heap[0], hsize, &out[tree_index[q], 0])
    if overflow:
        raise RuntimeError("kd-tree traversal stack overflow (unbalanced tree?)")
    return out_arr
