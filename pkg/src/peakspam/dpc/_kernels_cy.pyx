# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled kernels for the O(N^2) clustering loops over condensed distances.

Same contracts as _kernels_py. Row-range arguments shard work across threads;
each row is summed in ascending partner order, so results do not depend on
how the range is chunked.
"""

from libc.math cimport exp, INFINITY


cdef inline Py_ssize_t cidx(Py_ssize_t n, Py_ssize_t i, Py_ssize_t j) nogil:
    # condensed position of pair (i, j) with i < j
    return n * i - i * (i + 1) // 2 + (j - i - 1)


def rho_cutoff(const double[::1] condensed, Py_ssize_t n, double d_c,
               Py_ssize_t start, Py_ssize_t stop, double[::1] out):
    cdef Py_ssize_t i, j
    cdef long count
    with nogil:
        for i in range(start, stop):
            count = 0
            for j in range(i):
                if condensed[cidx(n, j, i)] < d_c:
                    count += 1
            for j in range(i + 1, n):
                if condensed[cidx(n, i, j)] < d_c:
                    count += 1
            out[i] = <double>count


def rho_gaussian(const double[::1] condensed, Py_ssize_t n, double d_c,
                 Py_ssize_t start, Py_ssize_t stop, double[::1] out):
    cdef Py_ssize_t i, j
    cdef double total, scaled
    with nogil:
        for i in range(start, stop):
            total = 0.0
            for j in range(i):
                scaled = condensed[cidx(n, j, i)] / d_c
                total += exp(-(scaled * scaled))
            for j in range(i + 1, n):
                scaled = condensed[cidx(n, i, j)] / d_c
                total += exp(-(scaled * scaled))
            out[i] = total


def delta_from_order(const double[::1] condensed, Py_ssize_t n,
                     const Py_ssize_t[::1] order,
                     double[::1] delta_out, Py_ssize_t[::1] nearest_out):
    cdef Py_ssize_t pos, prev, qi, qj, best_idx
    cdef double best, d
    cdef Py_ssize_t leader = order[0]
    with nogil:
        best = -INFINITY
        for qj in range(n):
            if qj == leader:
                continue
            d = condensed[cidx(n, leader, qj)] if leader < qj else condensed[cidx(n, qj, leader)]
            if d > best:
                best = d
        delta_out[leader] = best
        nearest_out[leader] = -1
        for pos in range(1, n):
            qi = order[pos]
            best = INFINITY
            best_idx = -1
            for prev in range(pos):
                qj = order[prev]
                d = condensed[cidx(n, qi, qj)] if qi < qj else condensed[cidx(n, qj, qi)]
                if d < best:
                    best = d
                    best_idx = qj
            delta_out[qi] = best
            nearest_out[qi] = best_idx


def assign_nearest_center(const double[::1] condensed, Py_ssize_t n,
                          const Py_ssize_t[::1] centers,
                          Py_ssize_t start, Py_ssize_t stop, Py_ssize_t[::1] out):
    cdef Py_ssize_t i, pos, center, best_pos
    cdef Py_ssize_t n_centers = centers.shape[0]
    cdef double best, d
    with nogil:
        for i in range(start, stop):
            best = INFINITY
            best_pos = -1
            for pos in range(n_centers):
                center = centers[pos]
                if center == i:
                    d = 0.0
                elif i < center:
                    d = condensed[cidx(n, i, center)]
                else:
                    d = condensed[cidx(n, center, i)]
                if d < best:
                    best = d
                    best_pos = pos
            out[i] = best_pos
