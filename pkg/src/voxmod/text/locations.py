"""Location extraction: sliding-window candidates fuzzily matched against
the gazetteer, with hierarchical backfill.

Candidate generation is exhaustive over 1..max_window token windows (a
closed gazetteer makes NER unnecessary). A matched district auto-fills its
state; a matched sub-district auto-fills district and state. District names
that exist in several states resolve through a state mentioned elsewhere in
the transcript, otherwise the match is flagged ambiguous and the parent
fields stay empty.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable

from .distance import string_distance_within
from .gazetteer import Gazetteer, PlaceRecord
from .transcript import Transcript, tokens

_SPECIFICITY = {"subdistrict": 3, "district": 2, "state": 1}


@dataclass(frozen=True)
class Candidate:
    text: str
    start: int
    end: int  # inclusive token index


@dataclass(frozen=True)
class LocationMatch:
    matched_text: str
    level: str
    state: str | None
    district: str | None = None
    sub_district: str | None = None
    distance: int = 0
    start: int = 0
    end: int = 0
    backfilled: tuple[str, ...] = ()
    ambiguous: bool = False

    def __post_init__(self):
        if not self.ambiguous:
            if self.level in ("district", "subdistrict") and not self.state:
                raise ValueError("district-level match must carry a state")
            if self.level == "subdistrict" and not self.district:
                raise ValueError("sub-district match must carry a district")


def default_threshold(length: int) -> int:
    return max(1, length // 4)


PAPER_HAMMING_THRESHOLD = 9  # "distance less than 10"


@dataclass(frozen=True)
class MatchConfig:
    metric: str = "levenshtein"
    max_window: int = 3
    prefer_specific: bool = True
    threshold: Callable[[int], int] | None = None

    def limit_for(self, length: int) -> int:
        if self.threshold is not None:
            return self.threshold(length)
        if self.metric == "padded-hamming":
            return PAPER_HAMMING_THRESHOLD
        return default_threshold(length)


def generate_candidates(t: Transcript, max_window: int = 3) -> list[Candidate]:
    """Every contiguous window of 1..max_window normalized tokens."""
    toks = tokens(t)
    seen: set[tuple[str, int]] = set()
    out: list[Candidate] = []
    for start in range(len(toks)):
        for width in range(1, max_window + 1):
            end = start + width - 1
            if end >= len(toks):
                break
            text = " ".join(toks[start : end + 1])
            if (text, start) not in seen:
                seen.add((text, start))
                out.append(Candidate(text=text, start=start, end=end))
    return out


@dataclass
class _RawMatch:
    candidate: Candidate
    level: str
    records: list[PlaceRecord]
    distance: int
    name: str  # gazetteer-side normalized name that matched


def _match_level(candidate: Candidate, g: Gazetteer, level: str, cfg: MatchConfig) -> _RawMatch | None:
    exact = g.lookup(level, candidate.text)
    if exact:
        return _RawMatch(candidate, level, exact, 0, candidate.text)
    limit = cfg.limit_for(len(candidate.text))
    best: tuple[int, str, list[PlaceRecord]] | None = None
    for name, records in g.names(level):
        d = string_distance_within(candidate.text, name, limit, cfg.metric)
        if d is None or d == 0:
            continue
        if best is None or d < best[0]:
            best = (d, name, records)
    if best is None:
        return None
    return _RawMatch(candidate, level, best[2], best[0], best[1])


def extract_locations(
    t: Transcript, g: Gazetteer, cfg: MatchConfig = MatchConfig()
) -> list[LocationMatch]:
    candidates = generate_candidates(t, cfg.max_window)
    raw: list[_RawMatch] = []
    for candidate in candidates:
        for level in ("subdistrict", "district", "state"):
            m = _match_level(candidate, g, level, cfg)
            if m is not None:
                raw.append(m)

    mentioned_states = {
        record.state for m in raw if m.level == "state" for record in m.records
    }

    def priority(m: _RawMatch):
        # exact matches claim their spans before any approximate match
        tier = 0 if m.distance == 0 else 1
        span = -(m.candidate.end - m.candidate.start)
        if cfg.prefer_specific:
            return (tier, -_SPECIFICITY[m.level], m.distance, span, m.candidate.start, m.name)
        return (tier, m.distance, span, -_SPECIFICITY[m.level], m.candidate.start, m.name)

    kept: list[_RawMatch] = []
    claimed: set[int] = set()
    for m in sorted(raw, key=priority):
        span = set(range(m.candidate.start, m.candidate.end + 1))
        if span & claimed:
            continue
        claimed |= span
        kept.append(m)

    out = [_resolve(m, mentioned_states) for m in kept]
    out.sort(key=lambda match: (match.start, match.end))
    return out


def _resolve(m: _RawMatch, mentioned_states: set[str]) -> LocationMatch:
    base = dict(
        matched_text=m.candidate.text,
        level=m.level,
        distance=m.distance,
        start=m.candidate.start,
        end=m.candidate.end,
    )
    if m.level == "state":
        return LocationMatch(state=m.records[0].state, **base)

    records = m.records
    if len(records) > 1:
        contextual = [r for r in records if r.state in mentioned_states]
        if len(contextual) == 1:
            records = contextual
        else:
            # unresolved collision: keep only the matched level's own name
            return LocationMatch(
                state=None,
                district=records[0].name if m.level == "district" else None,
                sub_district=records[0].name if m.level == "subdistrict" else None,
                ambiguous=True,
                **base,
            )
    record = records[0]
    if m.level == "district":
        return LocationMatch(
            state=record.state, district=record.name, backfilled=("state",), **base
        )
    return LocationMatch(
        state=record.state,
        district=record.district,
        sub_district=record.name,
        backfilled=("district", "state"),
        **base,
    )
