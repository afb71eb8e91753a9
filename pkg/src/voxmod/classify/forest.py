"""Random forest with Gini splits, stratified bootstrap, and vote confidence.

Trees are grown from scratch; the per-node split search runs on the
compiled kernel when available. Training is a pure function of
(data, params, seed): per-tree RNGs are derived as (seed, tree_index).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .._kernels import best_split_sorted
from .common import DimensionMismatch, Prediction
from .dataset import DegenerateDataset, LabeledDataset

MIN_TRAINING_ROWS = 10


@dataclass
class Tree:
    """Flat node arrays; feature < 0 marks a leaf. Feature indices are
    original (pre-mask) column positions."""

    feature: np.ndarray
    threshold: np.ndarray
    left: np.ndarray
    right: np.ndarray
    counts: np.ndarray  # (n_nodes, 2) samples per class at the node

    def leaf_votes(self, x: np.ndarray) -> tuple[int, np.ndarray]:
        node = 0
        while self.feature[node] >= 0:
            if x[self.feature[node]] <= self.threshold[node]:
                node = self.left[node]
            else:
                node = self.right[node]
        return node, self.counts[node]


@dataclass
class RandomForestModel:
    trees: list[Tree]
    n_trees: int
    max_depth: int
    min_leaf: int
    features_per_split: int
    feature_mask: tuple[int, ...]
    label_set: tuple[str, str]
    seed: int
    importances: np.ndarray = field(repr=False)  # aligned with feature_mask

    def predict(self, x) -> Prediction:
        x = np.asarray(getattr(x, "values", x), dtype=np.float64)
        if len(x) <= max(self.feature_mask):
            raise DimensionMismatch(
                f"vector of dim {len(x)} cannot index feature {max(self.feature_mask)}"
            )
        votes1 = 0
        for tree in self.trees:
            _, counts = tree.leaf_votes(x)
            if counts[1] > counts[0]:
                votes1 += 1
        votes0 = len(self.trees) - votes1
        if votes1 > votes0:
            return Prediction(self.label_set[1], votes1 / len(self.trees))
        return Prediction(self.label_set[0], votes0 / len(self.trees))

    def feature_importance(self) -> np.ndarray:
        """Mean impurity decrease per masked feature (RFE ranking)."""
        return self.importances


class _TreeBuilder:
    def __init__(self, X, y, mask, max_depth, min_leaf, n_candidates, rng):
        self.X = X
        self.y = y
        self.mask = mask
        self.max_depth = max_depth
        self.min_leaf = min_leaf
        self.n_candidates = n_candidates
        self.rng = rng
        self.feature: list[int] = []
        self.threshold: list[float] = []
        self.left: list[int] = []
        self.right: list[int] = []
        self.counts: list[tuple[int, int]] = []
        self.decrease = np.zeros(len(mask))
        self.n_root = 0

    def build(self, idx: np.ndarray) -> int:
        self.n_root = len(idx)
        return self._grow(idx, depth=0)

    def _new_node(self, idx) -> int:
        node = len(self.feature)
        self.feature.append(-1)
        self.threshold.append(0.0)
        self.left.append(-1)
        self.right.append(-1)
        n1 = int(self.y[idx].sum())
        self.counts.append((len(idx) - n1, n1))
        return node

    def _grow(self, idx: np.ndarray, depth: int) -> int:
        node = self._new_node(idx)
        n = len(idx)
        n1 = self.counts[node][1]
        if depth >= self.max_depth or n < 2 * self.min_leaf or n1 == 0 or n1 == n:
            return node
        candidates = self.rng.choice(len(self.mask), size=self.n_candidates, replace=False)
        labels = self.y[idx].astype(np.uint8)
        best_score = np.inf
        best_feature = -1
        best_threshold = 0.0
        for c in candidates:
            col = self.X[idx, self.mask[c]]
            order = np.argsort(col, kind="stable")
            found = best_split_sorted(
                np.ascontiguousarray(col[order]), np.ascontiguousarray(labels[order]), self.min_leaf
            )
            if found is not None and found[1] < best_score:
                best_threshold, best_score = found
                best_feature = int(c)
        if best_feature < 0:
            return node
        p1 = n1 / n
        node_gini = 2.0 * p1 * (1.0 - p1)
        self.decrease[best_feature] += (n / self.n_root) * (node_gini - best_score)
        go_left = self.X[idx, self.mask[best_feature]] <= best_threshold
        self.feature[node] = int(self.mask[best_feature])
        self.threshold[node] = best_threshold
        self.left[node] = self._grow(idx[go_left], depth + 1)
        self.right[node] = self._grow(idx[~go_left], depth + 1)
        return node

    def tree(self) -> Tree:
        return Tree(
            feature=np.array(self.feature, dtype=np.int32),
            threshold=np.array(self.threshold, dtype=np.float64),
            left=np.array(self.left, dtype=np.int32),
            right=np.array(self.right, dtype=np.int32),
            counts=np.array(self.counts, dtype=np.int64),
        )


def _validate(data: LabeledDataset):
    if len(set(data.labels)) < 2:
        raise DegenerateDataset("training data holds a single class")
    if len(data) < MIN_TRAINING_ROWS:
        raise DegenerateDataset(f"need at least {MIN_TRAINING_ROWS} rows, got {len(data)}")


def _stratified_bootstrap(y: np.ndarray, rng: np.random.Generator) -> np.ndarray:
    """Resample with replacement within each class, preserving class counts.

    Counters the blank-task class imbalance: every bootstrap keeps the
    original class proportions.
    """
    parts = []
    for cls in (0, 1):
        rows = np.nonzero(y == cls)[0]
        parts.append(rng.choice(rows, size=len(rows), replace=True))
    return np.concatenate(parts)


def train_random_forest(
    data: LabeledDataset,
    n_trees: int = 100,
    max_depth: int = 20,
    min_leaf: int = 2,
    features_per_split: int | str = "sqrt",
    seed: int = 0,
    feature_mask: tuple[int, ...] | None = None,
) -> RandomForestModel:
    _validate(data)
    mask = tuple(sorted(feature_mask)) if feature_mask is not None else tuple(range(data.dim))
    if not mask or max(mask) >= data.dim:
        raise ValueError("feature_mask out of range")
    if features_per_split == "sqrt":
        n_candidates = max(1, int(np.sqrt(len(mask))))
    else:
        n_candidates = min(int(features_per_split), len(mask))
    y = data.y()
    mask_arr = np.array(mask, dtype=np.int64)
    trees = []
    total_decrease = np.zeros(len(mask))
    for t in range(n_trees):
        rng = np.random.default_rng([seed, t])
        builder = _TreeBuilder(data.X, y, mask_arr, max_depth, min_leaf, n_candidates, rng)
        builder.build(_stratified_bootstrap(y, rng))
        trees.append(builder.tree())
        tree_total = builder.decrease.sum()
        if tree_total > 0:
            total_decrease += builder.decrease / tree_total
    return RandomForestModel(
        trees=trees,
        n_trees=n_trees,
        max_depth=max_depth,
        min_leaf=min_leaf,
        features_per_split=n_candidates,
        feature_mask=mask,
        label_set=data.label_set,
        seed=seed,
        importances=total_decrease / n_trees,
    )
