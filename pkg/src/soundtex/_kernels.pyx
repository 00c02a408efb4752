# cython: boundscheck=False, wraparound=False, cdivision=True, language_level=3
"""Compiled clustering kernels (hot path of the Lloyd iteration).

Same interface as ``soundtex._kernels_py``: assign points to their
nearest centroid and accumulate per-cluster sums. Distances use a naive
left-to-right sum per coordinate; ties go to the lowest centroid index.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()

COMPILED = True


def assign(double[:, ::1] X not None, double[:, ::1] centroids not None):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    cdef Py_ssize_t k = centroids.shape[0]
    if centroids.shape[1] != d:
        raise ValueError("centroid dimensionality does not match the data")

    labels_arr = np.zeros(n, dtype=np.int64)
    dists_arr = np.empty(n, dtype=np.float64)
    cdef long long[::1] labels = labels_arr
    cdef double[::1] dists = dists_arr

    cdef Py_ssize_t i, j, c
    cdef double best, dist, diff
    with nogil:
        for i in range(n):
            best = -1.0
            for c in range(k):
                dist = 0.0
                for j in range(d):
                    diff = X[i, j] - centroids[c, j]
                    dist += diff * diff
                if best < 0.0 or dist < best:
                    best = dist
                    labels[i] = c
            dists[i] = best
    return labels_arr, dists_arr


def accumulate(double[:, ::1] X not None, long long[::1] labels not None, int k):
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t d = X.shape[1]
    if labels.shape[0] != n:
        raise ValueError("labels length does not match the data")

    sums_arr = np.zeros((k, d), dtype=np.float64)
    counts_arr = np.zeros(k, dtype=np.int64)
    cdef double[:, ::1] sums = sums_arr
    cdef long long[::1] counts = counts_arr

    cdef Py_ssize_t i, j
    cdef long long c
    with nogil:
        for i in range(n):
            c = labels[i]
            counts[c] += 1
            for j in range(d):
                sums[c, j] += X[i, j]
    return sums_arr, counts_arr
