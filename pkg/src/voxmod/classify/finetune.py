"""Hard-negative fine-tuning from moderator corrections.

Feedback rows (items the deployed model got wrong) are replicated into the
base training set so the retrain emphasizes them; trainers stay oblivious
to weighting. The replication factor starts at 4 and escalates until the
retrained model makes no more feedback errors than the old one; if no
attempt manages that, the old model is returned (trivially satisfying the
bound).
"""

from __future__ import annotations

import numpy as np

from .dataset import LabeledDataset
from .forest import RandomForestModel, train_random_forest
from .svm import LinearSvmModel, train_linear_svm

WEIGHT_LADDER = (4, 8, 16)


def _retrain(model, data: LabeledDataset):
    if isinstance(model, RandomForestModel):
        return train_random_forest(
            data,
            n_trees=model.n_trees,
            max_depth=model.max_depth,
            min_leaf=model.min_leaf,
            features_per_split=model.features_per_split,
            seed=model.seed,
            feature_mask=model.feature_mask,
        )
    if isinstance(model, LinearSvmModel):
        return train_linear_svm(
            data, C=model.C, epochs=model.epochs, seed=model.seed, feature_mask=model.feature_mask
        )
    raise TypeError(f"cannot retrain {type(model).__name__}")


def _errors(model, data: LabeledDataset) -> int:
    return sum(model.predict(x).label != label for x, label in zip(data.X, data.labels))


def _replicate(base: LabeledDataset, feedback: LabeledDataset, factor: int) -> LabeledDataset:
    X = np.vstack([base.X] + [feedback.X] * factor)
    labels = list(base.labels)
    ids = list(base.clip_ids)
    for r in range(factor):
        labels.extend(feedback.labels)
        ids.extend(f"{cid}#hn{r}" for cid in feedback.clip_ids)
    return LabeledDataset(X=X, labels=tuple(labels), clip_ids=tuple(ids), label_set=base.label_set)


def finetune_hard_negatives(model, feedback: LabeledDataset, base: LabeledDataset):
    """Retrain on base + weighted feedback; empty feedback is a no-op."""
    if len(feedback) == 0:
        return model
    old_errors = _errors(model, feedback)
    best_model, best_errors = None, None
    for factor in WEIGHT_LADDER:
        candidate = _retrain(model, _replicate(base, feedback, factor))
        errors = _errors(candidate, feedback)
        if errors <= old_errors:
            return candidate
        if best_errors is None or errors < best_errors:
            best_model, best_errors = candidate, errors
    return model if best_errors is None or best_errors > old_errors else best_model
