"""Linear SVM: standardized features, hinge-loss subgradient descent,
Platt-calibrated confidence.

The optimizer is Pegasos-style SGD with lambda = 1/(C*n) and a fixed
1/(lambda*t) step schedule; sample order is a per-epoch permutation drawn
from the training seed, so training is a pure function of (data, params,
seed). Calibration is fit on a held-out 20% slice of the training data.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .common import DimensionMismatch, Prediction
from .dataset import DegenerateDataset, LabeledDataset

MIN_TRAINING_ROWS = 10


def _platt_fit(margins: np.ndarray, targets: np.ndarray) -> tuple[float, float]:
    """Newton fit of (a, b) so that P(y=+1 | m) = 1 / (1 + exp(a*m + b)).

    targets are +-1. Uses the standard regularized targets
    (n+ + 1)/(n+ + 2) and 1/(n- + 2) to avoid saturated probabilities.
    """
    prior1 = int(np.sum(targets > 0))
    prior0 = len(targets) - prior1
    hi = (prior1 + 1.0) / (prior1 + 2.0)
    lo = 1.0 / (prior0 + 2.0)
    t = np.where(targets > 0, hi, lo)
    a, b = 0.0, float(np.log((prior0 + 1.0) / (prior1 + 1.0)))
    sigma = 1e-12

    def objective(a_, b_):
        f = margins * a_ + b_
        # stable log(1 + exp(-|f|)) based form
        return float(np.sum(np.where(f >= 0, t * f + np.log1p(np.exp(-f)), (t - 1) * f + np.log1p(np.exp(f)))))

    fval = objective(a, b)
    for _ in range(100):
        f = margins * a + b
        p = np.where(f >= 0, np.exp(-f) / (1.0 + np.exp(-f)), 1.0 / (1.0 + np.exp(f)))
        q = 1.0 - p
        d2 = p * q
        h11 = float(np.sum(margins * margins * d2)) + sigma
        h22 = float(np.sum(d2)) + sigma
        h21 = float(np.sum(margins * d2))
        d1 = t - p
        g1 = float(np.sum(margins * d1))
        g2 = float(np.sum(d1))
        if abs(g1) < 1e-5 and abs(g2) < 1e-5:
            break
        det = h11 * h22 - h21 * h21
        da = -(h22 * g1 - h21 * g2) / det
        db = -(-h21 * g1 + h11 * g2) / det
        gd = g1 * da + g2 * db
        step = 1.0
        while step >= 1e-10:
            new_a, new_b = a + step * da, b + step * db
            new_f = objective(new_a, new_b)
            if new_f < fval + 1e-4 * step * gd:
                a, b, fval = new_a, new_b, new_f
                break
            step /= 2.0
        else:
            break
    return a, b


def _sigmoid_p1(margin: float, calibration: tuple[float, float]) -> float:
    a, b = calibration
    f = a * margin + b
    if f >= 0:
        return float(np.exp(-f) / (1.0 + np.exp(-f)))
    return float(1.0 / (1.0 + np.exp(f)))


@dataclass
class LinearSvmModel:
    weights: np.ndarray  # standardized space, aligned with feature_mask
    bias: float
    feature_mask: tuple[int, ...]
    label_set: tuple[str, str]
    calibration: tuple[float, float]
    mean: np.ndarray
    std: np.ndarray
    seed: int
    C: float = 1.0
    epochs: int = 50

    def margin(self, x) -> float:
        x = np.asarray(getattr(x, "values", x), dtype=np.float64)
        if len(x) <= max(self.feature_mask):
            raise DimensionMismatch(
                f"vector of dim {len(x)} cannot index feature {max(self.feature_mask)}"
            )
        z = (x[list(self.feature_mask)] - self.mean) / self.std
        return float(self.weights @ z + self.bias)

    def predict(self, x) -> Prediction:
        m = self.margin(x)
        p1 = _sigmoid_p1(m, self.calibration)
        if m >= 0:
            confidence = max(0.5, min(p1, 1.0 - 1e-12))
            return Prediction(self.label_set[1], confidence)
        confidence = max(0.5, min(1.0 - p1, 1.0 - 1e-12))
        return Prediction(self.label_set[0], confidence)

    def feature_importance(self) -> np.ndarray:
        return np.abs(self.weights)


def train_linear_svm(
    data: LabeledDataset,
    C: float = 1.0,
    epochs: int = 50,
    seed: int = 0,
    feature_mask: tuple[int, ...] | None = None,
    calibration_fraction: float = 0.2,
) -> LinearSvmModel:
    if len(set(data.labels)) < 2:
        raise DegenerateDataset("training data holds a single class")
    if len(data) < MIN_TRAINING_ROWS:
        raise DegenerateDataset(f"need at least {MIN_TRAINING_ROWS} rows, got {len(data)}")
    mask = tuple(sorted(feature_mask)) if feature_mask is not None else tuple(range(data.dim))
    if not mask or max(mask) >= data.dim:
        raise ValueError("feature_mask out of range")

    fit_part, cal_part = data.split(1.0 - calibration_fraction, seed=seed, stratify=True)
    if len(set(cal_part.labels)) < 2:  # tiny datasets: calibrate on the fit slice
        cal_part = fit_part

    cols = list(mask)
    X = fit_part.X[:, cols]
    mean = X.mean(axis=0)
    std = X.std(axis=0)
    keep = std > 0.0
    if not keep.any():
        raise DegenerateDataset("all features have zero variance")
    mask = tuple(c for c, k in zip(cols, keep) if k)
    mean, std = mean[keep], std[keep]
    Z = (X[:, keep] - mean) / std
    y = np.where(fit_part.y() == 1, 1.0, -1.0)

    n = len(Z)
    lam = 1.0 / (C * n)
    w = np.zeros(Z.shape[1])
    b = 0.0
    rng = np.random.default_rng(seed)
    t = 0
    for _ in range(epochs):
        for i in rng.permutation(n):
            t += 1
            eta = 1.0 / (lam * t)
            if y[i] * (w @ Z[i] + b) < 1.0:
                w = (1.0 - eta * lam) * w + eta * y[i] * Z[i]
                b += eta * y[i]
            else:
                w = (1.0 - eta * lam) * w

    Zc = (cal_part.X[:, list(mask)] - mean) / std
    cal_margins = Zc @ w + b
    cal_targets = np.where(cal_part.y() == 1, 1.0, -1.0)
    calibration = _platt_fit(cal_margins, cal_targets)

    return LinearSvmModel(
        weights=w,
        bias=float(b),
        feature_mask=mask,
        label_set=data.label_set,
        calibration=calibration,
        mean=mean,
        std=std,
        seed=seed,
        C=C,
        epochs=epochs,
    )
