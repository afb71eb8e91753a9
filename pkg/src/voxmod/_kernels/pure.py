"""Pure numpy/Python implementations of the hot kernels.

These are the reference semantics; the Cython module in _ckernels.pyx
mirrors them operation for operation so both backends return identical
results (same tie-breaking, same floating-point expression order).
"""

from __future__ import annotations

import numpy as np


def best_split_sorted(values: np.ndarray, labels: np.ndarray, min_leaf: int):
    """Best binary-Gini split of a feature column sorted ascending.

    values: float64, sorted ascending; labels: uint8 0/1 aligned with values.
    Returns (threshold, weighted_gini) for the best valid split, or None when
    no split leaves at least min_leaf samples on each side with distinct
    values at the boundary. Ties go to the leftmost split position.
    """
    n = values.shape[0]
    if n < 2 * min_leaf:
        return None
    left_n = np.arange(1, n, dtype=np.float64)
    valid = values[1:] != values[:-1]
    if min_leaf > 1:
        valid = valid & (left_n >= min_leaf) & ((n - left_n) >= min_leaf)
    if not valid.any():
        return None
    left_ones = np.cumsum(labels, dtype=np.float64)[:-1]
    right_n = n - left_n
    right_ones = float(labels.sum()) - left_ones
    left_p1 = left_ones / left_n
    right_p1 = right_ones / right_n
    gini_left = 2.0 * left_p1 * (1.0 - left_p1)
    gini_right = 2.0 * right_p1 * (1.0 - right_p1)
    score = (left_n * gini_left + right_n * gini_right) / n
    score[~valid] = np.inf
    best = int(np.argmin(score))
    threshold = 0.5 * (values[best] + values[best + 1])
    return float(threshold), float(score[best])


def levenshtein(a: str, b: str) -> int:
    """Unbounded edit distance (insert/delete/substitute, unit costs)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    prev = list(range(len(b) + 1))
    cur = [0] * (len(b) + 1)
    for i, ca in enumerate(a, start=1):
        cur[0] = i
        for j, cb in enumerate(b, start=1):
            cost = 0 if ca == cb else 1
            cur[j] = min(prev[j] + 1, cur[j - 1] + 1, prev[j - 1] + cost)
        prev, cur = cur, prev
    return prev[len(b)]


def bounded_levenshtein(a: str, b: str, limit: int) -> int:
    """Edit distance if it is <= limit, else limit + 1 (early exit).

    Banded DP: only the diagonal band of width 2*limit+1 can hold a
    distance <= limit, so rows outside it are skipped.
    """
    la, lb = len(a), len(b)
    if abs(la - lb) > limit:
        return limit + 1
    if a == b:
        return 0
    if limit <= 0:
        return limit + 1
    big = limit + 1
    prev = [min(j, big) for j in range(lb + 1)]
    cur = [0] * (lb + 1)
    for i in range(1, la + 1):
        cur[0] = min(i, big)
        lo = max(1, i - limit)
        hi = min(lb, i + limit)
        if lo > 1:
            cur[lo - 1] = big
        row_min = cur[0] if lo == 1 else big
        ca = a[i - 1]
        for j in range(lo, hi + 1):
            cost = 0 if ca == b[j - 1] else 1
            d = prev[j - 1] + cost
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
            return big
        prev, cur = cur, prev
    return prev[lb] if prev[lb] <= limit else big
