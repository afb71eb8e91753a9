"""Labeled feature datasets and their CSV form (clip_id,label,f0..f135)."""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass

import numpy as np


class DegenerateDataset(ValueError):
    """Single-class or too-small dataset, unusable for training."""


class EmptyDataset(ValueError):
    pass


@dataclass(frozen=True)
class LabeledDataset:
    X: np.ndarray  # (n, d)
    labels: tuple[str, ...]
    clip_ids: tuple[str, ...]
    label_set: tuple[str, str]

    def __post_init__(self):
        X = np.asarray(self.X, dtype=np.float64)
        if X.ndim != 2:
            raise ValueError("X must be 2-D")
        labels = tuple(self.labels)
        clip_ids = tuple(self.clip_ids)
        if not (X.shape[0] == len(labels) == len(clip_ids)):
            raise ValueError("X, labels and clip_ids must have matching lengths")
        if len(set(clip_ids)) != len(clip_ids):
            raise ValueError("clip_ids must be unique")
        unknown = set(labels) - set(self.label_set)
        if unknown:
            raise ValueError(f"labels outside label_set: {sorted(unknown)}")
        object.__setattr__(self, "X", X)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "clip_ids", clip_ids)
        object.__setattr__(self, "label_set", tuple(self.label_set))

    def __len__(self) -> int:
        return self.X.shape[0]

    @property
    def dim(self) -> int:
        return self.X.shape[1]

    def y(self) -> np.ndarray:
        """Labels as 0/1 indices into label_set."""
        index = {label: i for i, label in enumerate(self.label_set)}
        return np.fromiter((index[l] for l in self.labels), dtype=np.int64, count=len(self.labels))

    def subset(self, rows: np.ndarray) -> "LabeledDataset":
        rows = np.asarray(rows)
        return LabeledDataset(
            X=self.X[rows],
            labels=tuple(self.labels[i] for i in rows),
            clip_ids=tuple(self.clip_ids[i] for i in rows),
            label_set=self.label_set,
        )

    def split(self, train_fraction: float, seed: int, stratify: bool = True):
        """Deterministic (train, held_out) split, stratified by label."""
        rng = np.random.default_rng(seed)
        n = len(self)
        if stratify:
            train_idx: list[int] = []
            test_idx: list[int] = []
            y = self.y()
            for cls in (0, 1):
                rows = np.nonzero(y == cls)[0]
                rng.shuffle(rows)
                cut = max(1, int(round(len(rows) * train_fraction))) if len(rows) else 0
                cut = min(cut, len(rows))
                train_idx.extend(rows[:cut])
                test_idx.extend(rows[cut:])
            train_rows = np.sort(np.array(train_idx, dtype=np.int64))
            test_rows = np.sort(np.array(test_idx, dtype=np.int64))
        else:
            perm = rng.permutation(n)
            cut = int(round(n * train_fraction))
            train_rows = np.sort(perm[:cut])
            test_rows = np.sort(perm[cut:])
        return self.subset(train_rows), self.subset(test_rows)


def dataset_to_csv(data: LabeledDataset) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(["clip_id", "label"] + [f"f{i}" for i in range(data.dim)])
    for clip_id, label, row in zip(data.clip_ids, data.labels, data.X):
        writer.writerow([clip_id, label] + [repr(float(v)) for v in row])
    return buf.getvalue()


def dataset_from_csv(text: str, label_set: tuple[str, str] | None = None) -> LabeledDataset:
    reader = csv.reader(io.StringIO(text))
    header = next(reader, None)
    if not header or header[:2] != ["clip_id", "label"]:
        raise ValueError("expected header clip_id,label,f0..")
    ids: list[str] = []
    labels: list[str] = []
    rows: list[list[float]] = []
    for record in reader:
        if not record:
            continue
        ids.append(record[0])
        labels.append(record[1])
        rows.append([float(v) for v in record[2:]])
    if not rows:
        raise EmptyDataset("no data rows")
    if label_set is None:
        distinct = sorted(set(labels))
        if len(distinct) != 2:
            raise DegenerateDataset(f"expected 2 labels in CSV, found {distinct}")
        label_set = (distinct[0], distinct[1])
    return LabeledDataset(
        X=np.array(rows), labels=tuple(labels), clip_ids=tuple(ids), label_set=label_set
    )
