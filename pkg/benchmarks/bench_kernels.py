"""Benchmark: compiled kernels vs the pure-Python/numpy fallback.

Times the two hot inner loops (decision-tree split search, edit distance)
in isolation, then an end-to-end forest fit that exercises the split
kernel through real training.

Run:  python benchmarks/bench_kernels.py
"""

import time

import numpy as np

from voxmod._kernels import BACKEND, pure

try:
    from voxmod._kernels import _ckernels as compiled
except ImportError:
    compiled = None


def timeit(fn, repeats=5):
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        fn()
        best = min(best, time.perf_counter() - start)
    return best


def bench_split(impl, n=2000, rounds=200, seed=0):
    rng = np.random.default_rng(seed)
    values = np.sort(rng.normal(size=n))
    labels = rng.integers(0, 2, n).astype(np.uint8)

    def run():
        for _ in range(rounds):
            impl.best_split_sorted(values, labels, 2)

    return timeit(run)


def bench_levenshtein(impl, pairs=2000, seed=0):
    rng = np.random.default_rng(seed)
    alphabet = list("abcdefghij ")
    strings = [
        "".join(rng.choice(alphabet, size=rng.integers(5, 25))) for _ in range(2 * pairs)
    ]

    def run():
        for a, b in zip(strings[:pairs], strings[pairs:]):
            impl.levenshtein(a, b)
            impl.bounded_levenshtein(a, b, 2)

    return timeit(run)


def bench_forest_fit(rows=400, dim=136, seed=0):
    # exercises whichever backend voxmod._kernels selected at import
    from voxmod.classify import train_random_forest
    from voxmod.classify.dataset import LabeledDataset

    rng = np.random.default_rng(seed)
    X = rng.normal(size=(rows, dim))
    y = (X[:, :4].sum(axis=1) > 0).astype(int)
    X[:, 0] += y
    data = LabeledDataset(
        X=X,
        labels=tuple("b" if v else "a" for v in y),
        clip_ids=tuple(map(str, range(rows))),
        label_set=("a", "b"),
    )
    return timeit(lambda: train_random_forest(data, n_trees=30, seed=0), repeats=3)


def main():
    print(f"active backend at import: {BACKEND}")
    rows = []
    rows.append(("gini split search (200 x n=2000)", bench_split(pure),
                 bench_split(compiled) if compiled else None))
    rows.append(("levenshtein (2000 pairs, 5-25 chars)", bench_levenshtein(pure),
                 bench_levenshtein(compiled) if compiled else None))
    print(f"\n{'kernel':40s} {'pure (s)':>10s} {'compiled (s)':>13s} {'speedup':>8s}")
    for name, pure_t, compiled_t in rows:
        if compiled_t is None:
            print(f"{name:40s} {pure_t:10.4f} {'n/a':>13s} {'n/a':>8s}")
        else:
            print(f"{name:40s} {pure_t:10.4f} {compiled_t:13.4f} {pure_t / compiled_t:7.1f}x")
    fit = bench_forest_fit()
    print(f"\nforest fit (30 trees, 400x136) via {BACKEND} backend: {fit:.3f}s")
    if compiled is None:
        print("compiled kernels not built; install with a C toolchain to compare")


if __name__ == "__main__":
    main()
