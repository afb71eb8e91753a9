"""Versioned, self-describing model serialization (JSON container).

load(save(m)) predicts identically to m: floats survive the round trip via
repr-exact JSON encoding.
"""

from __future__ import annotations

import json

import numpy as np

from .forest import RandomForestModel, Tree
from .svm import LinearSvmModel

MAGIC = "voxmod-model"
FORMAT_VERSION = 1


class CorruptModel(ValueError):
    pass


class VersionMismatch(ValueError):
    pass


def save_model(model) -> bytes:
    if isinstance(model, RandomForestModel):
        kind = "random_forest"
        payload = {
            "trees": [
                {
                    "feature": t.feature.tolist(),
                    "threshold": t.threshold.tolist(),
                    "left": t.left.tolist(),
                    "right": t.right.tolist(),
                    "counts": t.counts.tolist(),
                }
                for t in model.trees
            ],
            "n_trees": model.n_trees,
            "max_depth": model.max_depth,
            "min_leaf": model.min_leaf,
            "features_per_split": model.features_per_split,
            "feature_mask": list(model.feature_mask),
            "label_set": list(model.label_set),
            "seed": model.seed,
            "importances": model.importances.tolist(),
        }
    elif isinstance(model, LinearSvmModel):
        kind = "linear_svm"
        payload = {
            "weights": model.weights.tolist(),
            "bias": model.bias,
            "feature_mask": list(model.feature_mask),
            "label_set": list(model.label_set),
            "calibration": list(model.calibration),
            "mean": model.mean.tolist(),
            "std": model.std.tolist(),
            "seed": model.seed,
            "C": model.C,
            "epochs": model.epochs,
        }
    else:
        raise TypeError(f"cannot serialize {type(model).__name__}")
    doc = {"magic": MAGIC, "version": FORMAT_VERSION, "kind": kind, "model": payload}
    return json.dumps(doc, separators=(",", ":")).encode("utf-8")


def load_model(data: bytes):
    try:
        doc = json.loads(data.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise CorruptModel(f"unreadable model container: {exc}") from exc
    if not isinstance(doc, dict) or doc.get("magic") != MAGIC:
        raise CorruptModel("missing container magic")
    if doc.get("version") != FORMAT_VERSION:
        raise VersionMismatch(f"unsupported model version {doc.get('version')!r}")
    kind = doc.get("kind")
    payload = doc.get("model")
    try:
        if kind == "random_forest":
            return RandomForestModel(
                trees=[
                    Tree(
                        feature=np.array(t["feature"], dtype=np.int32),
                        threshold=np.array(t["threshold"], dtype=np.float64),
                        left=np.array(t["left"], dtype=np.int32),
                        right=np.array(t["right"], dtype=np.int32),
                        counts=np.array(t["counts"], dtype=np.int64),
                    )
                    for t in payload["trees"]
                ],
                n_trees=payload["n_trees"],
                max_depth=payload["max_depth"],
                min_leaf=payload["min_leaf"],
                features_per_split=payload["features_per_split"],
                feature_mask=tuple(payload["feature_mask"]),
                label_set=tuple(payload["label_set"]),
                seed=payload["seed"],
                importances=np.array(payload["importances"], dtype=np.float64),
            )
        if kind == "linear_svm":
            return LinearSvmModel(
                weights=np.array(payload["weights"], dtype=np.float64),
                bias=payload["bias"],
                feature_mask=tuple(payload["feature_mask"]),
                label_set=tuple(payload["label_set"]),
                calibration=(payload["calibration"][0], payload["calibration"][1]),
                mean=np.array(payload["mean"], dtype=np.float64),
                std=np.array(payload["std"], dtype=np.float64),
                seed=payload["seed"],
                C=payload["C"],
                epochs=payload["epochs"],
            )
    except (KeyError, TypeError, IndexError) as exc:
        raise CorruptModel(f"malformed {kind} payload: {exc}") from exc
    raise CorruptModel(f"unknown model kind {kind!r}")
