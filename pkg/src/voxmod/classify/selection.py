"""Recursive feature elimination and a small hyper-parameter grid search."""

from __future__ import annotations

import itertools
from typing import Callable

import numpy as np

from .dataset import LabeledDataset
from .forest import train_random_forest
from .svm import train_linear_svm


class InvalidTarget(ValueError):
    pass


def forest_trainer(**params) -> Callable:
    def train(data: LabeledDataset, feature_mask):
        return train_random_forest(data, feature_mask=feature_mask, **params)

    return train


def svm_trainer(**params) -> Callable:
    def train(data: LabeledDataset, feature_mask):
        return train_linear_svm(data, feature_mask=feature_mask, **params)

    return train


def recursive_feature_elimination(
    trainer: Callable,
    data: LabeledDataset,
    target_k: int,
    drop_per_round: int = 8,
) -> list[int]:
    """Iteratively train, rank, and drop the weakest features.

    trainer(data, feature_mask) must return a model exposing
    feature_importance() aligned with its feature_mask (forests rank by mean
    impurity decrease, SVMs by |weight|). Each round drops the
    drop_per_round lowest-ranked features, never below target_k. Returns
    exactly target_k indices, sorted ascending.
    """
    if not (1 <= target_k <= data.dim):
        raise InvalidTarget(f"target_k={target_k} outside [1, {data.dim}]")
    if drop_per_round < 1:
        raise InvalidTarget("drop_per_round must be >= 1")
    current = list(range(data.dim))
    while len(current) > target_k:
        model = trainer(data, tuple(current))
        survivors = list(model.feature_mask)  # zero-variance columns may drop here
        if len(survivors) <= target_k:
            current = survivors + [f for f in current if f not in set(survivors)]
            current = current[:target_k] if len(current) >= target_k else current
            break
        importance = np.asarray(model.feature_importance(), dtype=np.float64)
        n_drop = min(drop_per_round, len(survivors) - target_k)
        ranked = np.argsort(importance, kind="stable")  # ascending, stable ties
        dropped = {survivors[i] for i in ranked[:n_drop]}
        current = [f for f in survivors if f not in dropped]
    return sorted(current)


def grid_search(
    trainer_factory: Callable[..., Callable],
    data: LabeledDataset,
    param_grid: dict[str, list],
    seed: int = 0,
    holdout_fraction: float = 0.25,
) -> tuple[dict, float]:
    """Exhaustive search over the small grids the tuning step needs.

    Returns (best_params, held-out accuracy); ties keep the first
    combination in grid order.
    """
    train_part, holdout = data.split(1.0 - holdout_fraction, seed=seed, stratify=True)
    keys = list(param_grid)
    best: tuple[dict, float] | None = None
    for combo in itertools.product(*(param_grid[k] for k in keys)):
        params = dict(zip(keys, combo))
        model = trainer_factory(**params, seed=seed)(train_part, None)
        hits = sum(
            model.predict(x).label == label for x, label in zip(holdout.X, holdout.labels)
        )
        accuracy = hits / len(holdout)
        if best is None or accuracy > best[1]:
            best = (params, accuracy)
    assert best is not None
    return best
