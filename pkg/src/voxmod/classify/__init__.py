"""Blank and gender triage classifiers: training, selection, evaluation,
persistence, and hard-negative fine-tuning."""

from .common import DimensionMismatch, Prediction
from .dataset import (
    DegenerateDataset,
    EmptyDataset,
    LabeledDataset,
    dataset_from_csv,
    dataset_to_csv,
)
from .finetune import finetune_hard_negatives
from .forest import RandomForestModel, train_random_forest
from .metrics import ConfusionMatrix, EvaluationReport, evaluate, matrix_metrics
from .persist import CorruptModel, VersionMismatch, load_model, save_model
from .selection import (
    InvalidTarget,
    forest_trainer,
    grid_search,
    recursive_feature_elimination,
    svm_trainer,
)
from .svm import LinearSvmModel, train_linear_svm


def predict(model, x) -> Prediction:
    """Dispatch to the model's own predict (forest vote or calibrated margin)."""
    return model.predict(x)


__all__ = [
    "ConfusionMatrix",
    "CorruptModel",
    "DegenerateDataset",
    "DimensionMismatch",
    "EmptyDataset",
    "EvaluationReport",
    "InvalidTarget",
    "LabeledDataset",
    "LinearSvmModel",
    "Prediction",
    "RandomForestModel",
    "VersionMismatch",
    "dataset_from_csv",
    "dataset_to_csv",
    "evaluate",
    "finetune_hard_negatives",
    "forest_trainer",
    "grid_search",
    "load_model",
    "matrix_metrics",
    "predict",
    "recursive_feature_elimination",
    "save_model",
    "svm_trainer",
    "train_linear_svm",
    "train_random_forest",
]
