"""Keyword-frequency categorization of transcripts (grievance triage)."""

from __future__ import annotations

import json
from dataclasses import dataclass
from pathlib import Path

from .transcript import Transcript, normalize_text, tokens


@dataclass(frozen=True)
class CategoryRuleSet:
    categories: dict[str, tuple[str, ...]]

    def __post_init__(self):
        normalized: dict[str, tuple[str, ...]] = {}
        for category, keywords in self.categories.items():
            cleaned = tuple(normalize_text(k) for k in keywords)
            if not cleaned or any(not k for k in cleaned):
                raise ValueError(f"category {category!r} has empty keywords")
            normalized[category] = cleaned
        object.__setattr__(self, "categories", normalized)

    @classmethod
    def from_json(cls, text: str) -> "CategoryRuleSet":
        raw = json.loads(text)
        return cls({category: tuple(words) for category, words in raw.items()})

    @classmethod
    def load(cls, path) -> "CategoryRuleSet":
        return cls.from_json(Path(path).read_text(encoding="utf-8"))


def categorize(t: Transcript, rules: CategoryRuleSet) -> list[tuple[str, int]]:
    """Distinct keywords of each category present in the transcript.

    A keyword hits on token match (single word) or phrase containment
    (multi-word, against the normalized text). Zero-hit categories are
    omitted; output sorted by count descending, ties by category name.
    """
    toks = tokens(t)
    token_set = set(toks)
    full_text = " " + " ".join(toks) + " "
    scores: list[tuple[str, int]] = []
    for category, keywords in sorted(rules.categories.items()):
        hits = 0
        for keyword in set(keywords):
            if " " in keyword:
                if f" {keyword} " in full_text:
                    hits += 1
            elif keyword in token_set:
                hits += 1
        if hits:
            scores.append((category, hits))
    scores.sort(key=lambda pair: (-pair[1], pair[0]))
    return scores
