# cython: boundscheck=False, wraparound=False, cdivision=True
"""Compiled hot kernels: Gini split search and edit distance.

Semantics mirror voxmod._kernels.pure exactly, including tie-breaking
(leftmost best split, first minimum) and floating-point expression order,
so the two backends are interchangeable bit for bit.
"""

import numpy as np

cimport numpy as cnp

cnp.import_array()


def best_split_sorted(double[::1] values, unsigned char[::1] labels, int min_leaf):
    cdef Py_ssize_t n = values.shape[0]
    if n < 2 * min_leaf:
        return None
    cdef double total_ones = 0.0
    cdef Py_ssize_t i
    for i in range(n):
        total_ones += labels[i]
    cdef double best_score = np.inf
    cdef Py_ssize_t best_i = -1
    cdef double left_ones = 0.0
    cdef double left_n, right_n, left_p1, right_p1, gini_left, gini_right, score
    for i in range(1, n):
        left_ones += labels[i - 1]
        if values[i] == values[i - 1]:
            continue
        left_n = i
        right_n = n - i
        if left_n < min_leaf or right_n < min_leaf:
            continue
        left_p1 = left_ones / left_n
        right_p1 = (total_ones - left_ones) / right_n
        gini_left = 2.0 * left_p1 * (1.0 - left_p1)
        gini_right = 2.0 * right_p1 * (1.0 - right_p1)
        score = (left_n * gini_left + right_n * gini_right) / n
        if score < best_score:
            best_score = score
            best_i = i
    if best_i < 0:
        return None
    cdef double threshold = 0.5 * (values[best_i - 1] + values[best_i])
    return threshold, best_score


def levenshtein(str a, str b):
    if a == b:
        return 0
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    if la == 0:
        return lb
    if lb == 0:
        return la
    cdef cnp.ndarray[cnp.int64_t, ndim=1] prev_arr = np.arange(lb + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cur_arr = np.zeros(lb + 1, dtype=np.int64)
    cdef long long[::1] prev = prev_arr
    cdef long long[::1] cur = cur_arr
    cdef long long[::1] tmp
    cdef Py_ssize_t i, j
    cdef long long d, up, left
    cdef Py_UCS4 ca
    for i in range(1, la + 1):
        cur[0] = i
        ca = a[i - 1]
        for j in range(1, lb + 1):
            d = prev[j - 1] + (0 if ca == <Py_UCS4>b[j - 1] else 1)
            up = prev[j] + 1
            if up < d:
                d = up
            left = cur[j - 1] + 1
            if left < d:
                d = left
            cur[j] = d
        tmp = prev
        prev = cur
        cur = tmp
    return int(prev[lb])


def bounded_levenshtein(str a, str b, int limit):
    cdef Py_ssize_t la = len(a)
    cdef Py_ssize_t lb = len(b)
    cdef long long big = limit + 1
    if la - lb > limit or lb - la > limit:
        return int(big)
    if a == b:
        return 0
    if limit <= 0:
        return int(big)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] prev_arr = np.empty(lb + 1, dtype=np.int64)
    cdef cnp.ndarray[cnp.int64_t, ndim=1] cur_arr = np.zeros(lb + 1, dtype=np.int64)
    cdef long long[::1] prev = prev_arr
    cdef long long[::1] cur = cur_arr
    cdef long long[::1] tmp
    cdef Py_ssize_t i, j, lo, hi
    cdef long long d, up, left, row_min
    cdef Py_UCS4 ca
    for j in range(lb + 1):
        prev[j] = j if j < big else big
    for i in range(1, la + 1):
        cur[0] = i if i < big else big
        lo = i - limit
        if lo < 1:
            lo = 1
        hi = i + limit
        if hi > lb:
            hi = lb
        if lo > 1:
            cur[lo - 1] = big
        row_min = cur[0] if lo == 1 else big
        ca = a[i - 1]
        for j in range(lo, hi + 1):
            d = prev[j - 1] + (0 if ca == <Py_UCS4>b[j - 1] else 1)
            up = prev[j] + 1
            if up < d:
                d = up
            left = cur[j - 1] + 1
            if left < d:
                d = left
            if d > big:
                d = big
            cur[j] = d
            if d < row_min:
                row_min = d
        if hi < lb:
            cur[hi + 1] = big
        if row_min > limit:
            return int(big)
        tmp = prev
        prev = cur
        cur = tmp
    return int(prev[lb]) if prev[lb] <= limit else int(big)
