"""Backend parity and brute-force oracles for the hot kernels."""

import numpy as np
import pytest

from voxmod._kernels import BACKEND, pure

if BACKEND == "compiled":
    from voxmod._kernels import _ckernels as compiled
else:
    compiled = None

needs_compiled = pytest.mark.skipif(compiled is None, reason="compiled kernels not built")


def brute_force_best_split(values, labels, min_leaf):
    """Try every split position directly from the Gini definition."""
    n = len(values)
    best = None
    for i in range(1, n):
        if values[i] == values[i - 1] or i < min_leaf or n - i < min_leaf:
            continue
        left, right = labels[:i], labels[i:]
        def gini(part):
            p1 = np.mean(part)
            return 2.0 * p1 * (1.0 - p1)
        score = (len(left) * gini(left) + len(right) * gini(right)) / n
        if best is None or score < best[1] - 1e-12:
            best = (0.5 * (values[i - 1] + values[i]), score)
    return best


class TestBestSplit:
    def test_perfect_split(self):
        values = np.array([1.0, 2.0, 3.0, 4.0])
        labels = np.array([0, 0, 1, 1], dtype=np.uint8)
        threshold, score = pure.best_split_sorted(values, labels, 1)
        assert threshold == 2.5
        assert score == 0.0

    def test_no_valid_split_on_constant(self):
        values = np.zeros(6)
        labels = np.array([0, 1, 0, 1, 0, 1], dtype=np.uint8)
        assert pure.best_split_sorted(values, labels, 1) is None

    def test_min_leaf_respected(self):
        values = np.array([1.0, 2.0, 3.0, 4.0])
        labels = np.array([1, 0, 0, 0], dtype=np.uint8)
        found = pure.best_split_sorted(values, labels, 2)
        assert found is not None
        threshold, _ = found
        assert threshold == 2.5  # only the middle split leaves 2 per side

    @pytest.mark.parametrize("seed", range(20))
    def test_matches_brute_force(self, seed):
        rng = np.random.default_rng(seed)
        n = int(rng.integers(4, 40))
        values = np.sort(np.round(rng.normal(size=n), 2))
        labels = rng.integers(0, 2, n).astype(np.uint8)
        got = pure.best_split_sorted(values, labels, 2)
        want = brute_force_best_split(values, labels, 2)
        if want is None:
            assert got is None
        else:
            assert got is not None
            assert got[1] == pytest.approx(want[1], abs=1e-12)

    @needs_compiled
    @pytest.mark.parametrize("seed", range(30))
    def test_backend_parity(self, seed):
        rng = np.random.default_rng(1000 + seed)
        n = int(rng.integers(2, 60))
        values = np.sort(rng.choice([0.0, 0.5, 1.0, 2.0, 3.5], size=n))
        labels = rng.integers(0, 2, n).astype(np.uint8)
        min_leaf = int(rng.integers(1, 4))
        a = pure.best_split_sorted(values, labels, min_leaf)
        b = compiled.best_split_sorted(values, labels, min_leaf)
        assert (a is None) == (b is None)
        if a is not None:
            assert a[0] == b[0]
            assert a[1] == b[1]


def dp_levenshtein(a, b):
    m, n = len(a), len(b)
    d = [[0] * (n + 1) for _ in range(m + 1)]
    for i in range(m + 1):
        d[i][0] = i
    for j in range(n + 1):
        d[0][j] = j
    for i in range(1, m + 1):
        for j in range(1, n + 1):
            d[i][j] = min(
                d[i - 1][j] + 1,
                d[i][j - 1] + 1,
                d[i - 1][j - 1] + (a[i - 1] != b[j - 1]),
            )
    return d[m][n]


WORDS = ["", "a", "ab", "patna", "patana", "delhi", "champaran", "champaaran", "गया", "गयाा"]


class TestLevenshtein:
    @pytest.mark.parametrize("a", WORDS)
    @pytest.mark.parametrize("b", WORDS)
    def test_matches_dp_oracle(self, a, b):
        assert pure.levenshtein(a, b) == dp_levenshtein(a, b)

    @pytest.mark.parametrize("a", WORDS)
    @pytest.mark.parametrize("b", WORDS)
    @pytest.mark.parametrize("limit", [0, 1, 2, 5])
    def test_bounded_agrees_with_unbounded(self, a, b, limit):
        d = dp_levenshtein(a, b)
        bounded = pure.bounded_levenshtein(a, b, limit)
        if d <= limit:
            assert bounded == d
        else:
            assert bounded == limit + 1

    @needs_compiled
    @pytest.mark.parametrize("a", WORDS)
    @pytest.mark.parametrize("b", WORDS)
    def test_backend_parity(self, a, b):
        assert compiled.levenshtein(a, b) == pure.levenshtein(a, b)
        for limit in (0, 1, 3):
            assert compiled.bounded_levenshtein(a, b, limit) == pure.bounded_levenshtein(a, b, limit)

    def test_symmetry_and_identity_on_random_strings(self, rng):
        alphabet = "abcdefg"
        strings = [
            "".join(rng.choice(list(alphabet), size=rng.integers(0, 9)))
            for _ in range(30)
        ]
        for a in strings[:10]:
            for b in strings[10:20]:
                assert pure.levenshtein(a, b) == pure.levenshtein(b, a)
                assert (pure.levenshtein(a, b) == 0) == (a == b)
        # triangle inequality on random triples
        for a, b, c in zip(strings[:10], strings[10:20], strings[20:30]):
            assert pure.levenshtein(a, c) <= pure.levenshtein(a, b) + pure.levenshtein(b, c)
