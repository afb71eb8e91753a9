"""Transcript-side processing: gazetteer matching, categorization, WER,
and low-confidence spans."""

from .categorize import CategoryRuleSet, categorize
from .distance import padded_hamming, string_distance, string_distance_within
from .gazetteer import BadAlias, Gazetteer, OrphanEntry, PlaceRecord, load_gazetteer, parse_gazetteer
from .locations import (
    Candidate,
    LocationMatch,
    MatchConfig,
    default_threshold,
    extract_locations,
    generate_candidates,
)
from .transcript import (
    MissingConfidences,
    Transcript,
    Word,
    low_confidence_spans,
    normalize_text,
    tokens,
)
from .wer import EmptyReference, WerResult, compute_wer

__all__ = [
    "BadAlias",
    "Candidate",
    "CategoryRuleSet",
    "EmptyReference",
    "Gazetteer",
    "LocationMatch",
    "MatchConfig",
    "MissingConfidences",
    "OrphanEntry",
    "PlaceRecord",
    "Transcript",
    "WerResult",
    "Word",
    "categorize",
    "compute_wer",
    "default_threshold",
    "extract_locations",
    "generate_candidates",
    "load_gazetteer",
    "low_confidence_spans",
    "normalize_text",
    "padded_hamming",
    "parse_gazetteer",
    "string_distance",
    "string_distance_within",
    "tokens",
]
