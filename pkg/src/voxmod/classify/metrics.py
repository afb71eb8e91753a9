"""Confusion-matrix metrics for the binary triage classifiers.

The false negative rate is oriented around the costly error: a genuine
(acceptable) item predicted as the rejectable class. The rejectable class
is the first label by convention.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .dataset import EmptyDataset, LabeledDataset


@dataclass(frozen=True)
class ConfusionMatrix:
    labels: tuple[str, str]
    counts: np.ndarray  # rows = true, cols = predicted

    def __post_init__(self):
        counts = np.asarray(self.counts, dtype=np.int64)
        if counts.shape != (2, 2):
            raise ValueError("expected a 2x2 matrix")
        if (counts < 0).any():
            raise ValueError("counts must be non-negative")
        object.__setattr__(self, "counts", counts)
        object.__setattr__(self, "labels", tuple(self.labels))

    @property
    def total(self) -> int:
        return int(self.counts.sum())


@dataclass(frozen=True)
class EvaluationReport:
    confusion: ConfusionMatrix
    accuracy: float
    false_negative_rate: float


def matrix_metrics(cm: ConfusionMatrix, reject_label: str | None = None) -> EvaluationReport:
    """Accuracy and FNR from a confusion matrix.

    FNR = genuine items predicted as reject_label / total genuine items,
    where genuine is the non-rejectable class. Defaults reject_label to the
    first label (blank for the blank task; for gender the accuracy is the
    meaningful number).
    """
    if cm.total == 0:
        raise EmptyDataset("empty confusion matrix")
    reject = cm.labels.index(reject_label) if reject_label is not None else 0
    genuine = 1 - reject
    accuracy = float(np.trace(cm.counts)) / cm.total
    genuine_total = int(cm.counts[genuine].sum())
    fnr = float(cm.counts[genuine, reject]) / genuine_total if genuine_total else 0.0
    return EvaluationReport(confusion=cm, accuracy=accuracy, false_negative_rate=fnr)


def evaluate(model, test: LabeledDataset, reject_label: str | None = None) -> EvaluationReport:
    """Run the model over a test set and report confusion, accuracy, FNR."""
    if len(test) == 0:
        raise EmptyDataset("empty test set")
    labels = test.label_set
    index = {label: i for i, label in enumerate(labels)}
    counts = np.zeros((2, 2), dtype=np.int64)
    for x, label in zip(test.X, test.labels):
        predicted = model.predict(x).label
        counts[index[label], index[predicted]] += 1
    return matrix_metrics(ConfusionMatrix(labels=labels, counts=counts), reject_label)
