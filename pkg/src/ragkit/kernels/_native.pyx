# cython: language_level=3, boundscheck=False, wraparound=False, cdivision=True
"""Compiled scoring kernels: BM25 accumulation and dense similarity scans.

Mirrors ``_python`` exactly; both accumulate in float64.
"""

import numpy as np


def bm25_accumulate(const int[::1] doc_ids, const double[::1] tfs,
                    const long long[::1] term_bounds, const double[::1] idfs,
                    const double[::1] doc_lens, double avgdl, double k1, double b):
    cdef Py_ssize_t n_docs = doc_lens.shape[0]
    cdef Py_ssize_t n_terms = idfs.shape[0]
    out = np.zeros(n_docs, dtype=np.float64)
    cdef double[::1] scores = out
    cdef Py_ssize_t t
    cdef long long i, lo, hi
    cdef int d
    cdef double tf, idf
    for t in range(n_terms):
        lo = term_bounds[t]
        hi = term_bounds[t + 1]
        idf = idfs[t]
        for i in range(lo, hi):
            d = doc_ids[i]
            tf = tfs[i]
            scores[d] += idf * tf * (k1 + 1.0) / (
                tf + k1 * (1.0 - b + b * doc_lens[d] / avgdl)
            )
    return out


def ip_scores(const float[:, ::1] matrix, const float[::1] query):
    cdef Py_ssize_t n = matrix.shape[0]
    cdef Py_ssize_t dim = matrix.shape[1]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    cdef Py_ssize_t i, j
    cdef double acc
    for i in range(n):
        acc = 0.0
        for j in range(dim):
            acc += <double>matrix[i, j] * <double>query[j]
        res[i] = acc
    return out


def l2sq_scores(const float[:, ::1] matrix, const float[::1] query):
    cdef Py_ssize_t n = matrix.shape[0]
    cdef Py_ssize_t dim = matrix.shape[1]
    out = np.empty(n, dtype=np.float64)
    cdef double[::1] res = out
    cdef Py_ssize_t i, j
    cdef double acc, diff
    for i in range(n):
        acc = 0.0
        for j in range(dim):
            diff = <double>matrix[i, j] - <double>query[j]
            acc += diff * diff
        res[i] = acc
    return out
