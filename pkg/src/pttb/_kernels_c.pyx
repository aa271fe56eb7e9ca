# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled decision kernels (same contract as ``pttb._kernels_py``)."""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def outcomes_many(const double[:, ::1] delta, const cnp.int64_t[:, ::1] orders,
                  const cnp.int64_t[:, ::1] dirs, const double[:, ::1] thrs):
    cdef Py_ssize_t n_cand = orders.shape[0]
    cdef Py_ssize_t n_pairs = delta.shape[0]
    cdef Py_ssize_t n_cues = delta.shape[1]
    out_arr = np.zeros((n_cand, n_pairs), dtype=np.int8)
    cdef signed char[:, ::1] out = out_arr
    cdef Py_ssize_t c, p, k, m
    cdef double d
    for c in range(n_cand):
        for p in range(n_pairs):
            for k in range(n_cues):
                m = orders[c, k]
                d = delta[p, m]
                if d > thrs[c, m] or -d > thrs[c, m]:
                    if d > 0:
                        out[c, p] = <signed char> dirs[c, m]
                    else:
                        out[c, p] = <signed char> (-dirs[c, m])
                    break
    return out_arr


def count_many(const double[:, ::1] delta, const cnp.int64_t[::1] y,
               const cnp.int64_t[:, ::1] orders, const cnp.int64_t[:, ::1] dirs,
               const double[:, ::1] thrs):
    cdef Py_ssize_t n_cand = orders.shape[0]
    cdef Py_ssize_t n_pairs = delta.shape[0]
    cdef Py_ssize_t n_cues = delta.shape[1]
    counts_arr = np.zeros((n_cand, 3), dtype=np.float64)
    cdef double[:, ::1] counts = counts_arr
    cdef Py_ssize_t c, p, k, m
    cdef double d
    cdef int decision, y_sign
    for c in range(n_cand):
        for p in range(n_pairs):
            decision = 0
            for k in range(n_cues):
                m = orders[c, k]
                d = delta[p, m]
                if d > thrs[c, m] or -d > thrs[c, m]:
                    if d > 0:
                        decision = <int> dirs[c, m]
                    else:
                        decision = <int> (-dirs[c, m])
                    break
            if decision == 0:
                counts[c, 2] += 1.0
            else:
                y_sign = 2 * <int> y[p] - 1
                if decision == y_sign:
                    counts[c, 0] += 1.0
                else:
                    counts[c, 1] += 1.0
    return counts_arr
