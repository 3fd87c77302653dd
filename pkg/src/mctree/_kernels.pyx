# cython: boundscheck=False, wraparound=False, cdivision=True, initializedcheck=False
"""Compiled split-search kernels.

Mirrors ``_kernels_py`` operation for operation so both backends return
bit-identical scores.
"""

import numpy as np
cimport numpy as cnp
from libc.stdlib cimport llabs

cnp.import_array()

ctypedef cnp.intp_t intp


cdef inline bint _better(double score, long long bal, double best, long long best_bal, bint maximize) noexcept nogil:
    if maximize:
        if score > best:
            return True
    elif score < best:
        return True
    return score == best and bal < best_bal


cdef void _gini_column(const double[:, ::1] X, const intp[:, ::1] order, const intp[::1] y,
                       Py_ssize_t j, long long[::1] left, long long[::1] right,
                       const long long[::1] totals, Py_ssize_t n_classes,
                       double* out_score, Py_ssize_t* out_pos) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t i, c, k
    cdef long long nl, nr, num, sum_l2 = 0, sum_r2 = 0, bal, best_bal = n + 1
    cdef double score, best = 0.0
    cdef Py_ssize_t best_pos = -1
    for c in range(n_classes):
        left[c] = 0
        right[c] = totals[c]
        sum_r2 += totals[c] * totals[c]
    for i in range(n - 1):
        k = order[i, j]
        c = y[k]
        sum_l2 += 2 * left[c] + 1
        left[c] += 1
        sum_r2 -= 2 * right[c] - 1
        right[c] -= 1
        if X[k, j] == X[order[i + 1, j], j]:
            continue
        nl = i + 1
        nr = n - nl
        num = n * nl * nr - nr * sum_l2 - nl * sum_r2
        score = <double>num / <double>(n * nl * nr)
        bal = llabs(nl - nr)
        if best_pos < 0 or _better(score, bal, best, best_bal, False):
            best = score
            best_bal = bal
            best_pos = i
    out_score[0] = best
    out_pos[0] = best_pos


cdef void _maxcut_column(const double[:, ::1] X, const intp[:, ::1] order, const intp[::1] y,
                         Py_ssize_t j, double[::1] class_sum, double[::1] rest_count,
                         const long long[::1] totals, Py_ssize_t n_classes,
                         double* out_score, Py_ssize_t* out_pos) noexcept nogil:
    cdef Py_ssize_t n = X.shape[0]
    cdef Py_ssize_t i, c, k
    cdef double total = 0.0, theta = 0.0, x, best = 0.0
    cdef long long bal, best_bal = n + 1
    cdef Py_ssize_t best_pos = -1
    for c in range(n_classes):
        class_sum[c] = 0.0
    for i in range(n):
        k = order[i, j]
        class_sum[y[k]] += X[k, j]
    for c in range(n_classes):
        total += class_sum[c]
    for c in range(n_classes):
        # S_c: sum of values outside class c; N_c: count outside class c
        class_sum[c] = total - class_sum[c]
        rest_count[c] = <double>(n - totals[c])
    for i in range(n - 1):
        k = order[i, j]
        c = y[k]
        x = X[k, j]
        theta = theta + (class_sum[c] - x * rest_count[c])
        if x == X[order[i + 1, j], j]:
            continue
        bal = llabs(2 * (i + 1) - n)
        if best_pos < 0 or _better(theta, bal, best, best_bal, True):
            best = theta
            best_bal = bal
            best_pos = i
    out_score[0] = best
    out_pos[0] = best_pos


def best_split(const double[:, ::1] X, const intp[:, ::1] order, const intp[::1] y,
               Py_ssize_t n_classes, int criterion):
    """Best (feature, last-left sorted position, score) over all columns.

    ``criterion`` is 0 for Gini (minimize) and 1 for Max-Cut (maximize).
    Returns ``(-1, -1, nan)`` when no column has a candidate threshold.
    """
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1]
    cdef Py_ssize_t j, pos, best_j = -1, best_pos = -1
    cdef double score, best = 0.0
    cdef long long bal, best_bal = 0
    cdef bint maximize = criterion == 1
    totals_np = np.bincount(np.asarray(y), minlength=n_classes).astype(np.int64)
    cdef long long[::1] totals = totals_np
    cdef long long[::1] left = np.zeros(n_classes, dtype=np.int64)
    cdef long long[::1] right = np.zeros(n_classes, dtype=np.int64)
    cdef double[::1] class_sum = np.zeros(n_classes, dtype=np.float64)
    cdef double[::1] rest_count = np.zeros(n_classes, dtype=np.float64)
    with nogil:
        for j in range(d):
            if maximize:
                _maxcut_column(X, order, y, j, class_sum, rest_count, totals, n_classes, &score, &pos)
            else:
                _gini_column(X, order, y, j, left, right, totals, n_classes, &score, &pos)
            if pos < 0:
                continue
            bal = llabs(2 * (pos + 1) - n)
            if best_j < 0 or _better(score, bal, best, best_bal, maximize):
                best = score
                best_bal = bal
                best_j = j
                best_pos = pos
    if best_j < 0:
        return -1, -1, float("nan")
    return best_j, best_pos, best


def max_cut_prefix(const double[::1] xs, const intp[::1] ys, Py_ssize_t n_classes):
    """Cut values theta_1..theta_{n-1} for already-sorted values."""
    cdef Py_ssize_t n = xs.shape[0], i, c
    cdef double total = 0.0, theta = 0.0
    cdef double[::1] class_sum = np.zeros(n_classes, dtype=np.float64)
    cdef double[::1] rest_count = np.zeros(n_classes, dtype=np.float64)
    out_np = np.empty(max(n - 1, 0), dtype=np.float64)
    cdef double[::1] out = out_np
    for i in range(n):
        class_sum[ys[i]] += xs[i]
        rest_count[ys[i]] += 1.0
    for c in range(n_classes):
        total += class_sum[c]
    for c in range(n_classes):
        class_sum[c] = total - class_sum[c]
        rest_count[c] = <double>n - rest_count[c]
    for i in range(n - 1):
        c = ys[i]
        theta = theta + (class_sum[c] - xs[i] * rest_count[c])
        out[i] = theta
    return out_np


def project(const double[:, ::1] X, const double[::1] center, const double[::1] direction):
    """Row-wise (x - center) . direction, accumulated feature by feature."""
    cdef Py_ssize_t n = X.shape[0], d = X.shape[1], i, j
    cdef double acc
    out_np = np.empty(n, dtype=np.float64)
    cdef double[::1] out = out_np
    with nogil:
        for i in range(n):
            acc = 0.0
            for j in range(d):
                acc = acc + (X[i, j] - center[j]) * direction[j]
            out[i] = acc
    return out_np
