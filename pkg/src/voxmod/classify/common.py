"""Shared prediction types for the trained classifiers."""

from __future__ import annotations

from dataclasses import dataclass


class DimensionMismatch(ValueError):
    """Input vector too short for the model's feature mask."""


@dataclass(frozen=True)
class Prediction:
    label: str
    confidence: float

    def __post_init__(self):
        if not (0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")
