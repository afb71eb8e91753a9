"""Transcripts, text normalization, and low-confidence span computation."""

from __future__ import annotations

import unicodedata
from dataclasses import dataclass


class MissingConfidences(ValueError):
    """Operation needs per-word confidences the transcript does not carry."""


@dataclass(frozen=True)
class Word:
    text: str
    confidence: float | None = None

    def __post_init__(self):
        if self.confidence is not None and not (0.0 <= self.confidence <= 1.0):
            raise ValueError(f"confidence {self.confidence} outside [0, 1]")


@dataclass(frozen=True)
class Transcript:
    words: tuple[Word, ...]
    language: str = "hi"
    source: str = "manual"

    def __post_init__(self):
        object.__setattr__(self, "words", tuple(self.words))

    @classmethod
    def from_text(cls, text: str, language: str = "hi", source: str = "manual") -> "Transcript":
        return cls(words=tuple(Word(t) for t in text.split()), language=language, source=source)

    def text(self) -> str:
        return " ".join(w.text for w in self.words)

    def has_confidences(self) -> bool:
        return bool(self.words) and all(w.confidence is not None for w in self.words)


def normalize_text(text: str) -> str:
    """Unicode-aware lowercase, punctuation stripped, whitespace collapsed.

    Non-cased scripts (Devanagari) pass through except for the whitespace
    normalization; no transliteration.
    """
    lowered = text.lower()
    kept = "".join(
        " " if unicodedata.category(ch).startswith("P") else ch for ch in lowered
    )
    return " ".join(kept.split())


def tokens(t: Transcript) -> list[str]:
    """Normalized word tokens; words that are pure punctuation vanish."""
    out: list[str] = []
    for w in t.words:
        out.extend(normalize_text(w.text).split())
    return out


def low_confidence_spans(t: Transcript, threshold: float = 0.7) -> list[tuple[int, int]]:
    """Maximal runs of word indices with confidence < threshold (inclusive)."""
    if not t.has_confidences():
        raise MissingConfidences("transcript has no per-word confidences")
    spans: list[tuple[int, int]] = []
    start = None
    for i, w in enumerate(t.words):
        if w.confidence < threshold:
            if start is None:
                start = i
        elif start is not None:
            spans.append((start, i - 1))
            start = None
    if start is not None:
        spans.append((start, len(t.words) - 1))
    return spans
