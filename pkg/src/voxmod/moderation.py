"""Moderation item lifecycle: states, metadata schema, decisions, timings.

State machine:

    received -> auto_rejected_blank
    received -> pending_review -> accepted | rejected

No other edges. Transition helpers are pure (item in, new item out); the
ModerationStore owns id allocation, duplicate detection, and lookup, and is
what the service's event log rebuilds.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field, replace
from enum import Enum

import numpy as np

from .audio import AudioClip, ClipTooShort
from .classify.common import Prediction
from .features import FeatureVector136, clip_features
from .text.locations import LocationMatch
from .text.transcript import Transcript

REJECTION_REASONS = ("blank", "noisy", "inarticulate", "editorial")
GENDERS = ("female", "male", "third_gender", "group", "unmarked")
TASKS = ("triage", "metadata", "transcription", "edit")
PHASES = ("with_automation", "without_automation")
OUTCOME_KINDS = ("skipped", "gist", "full")
ASSISTANCE_LEVELS = ("none", "partial", "full")

DEFAULT_REJECT_THRESHOLD = 0.9
DEFAULT_GENDER_FLOOR = 0.75


class ItemState(str, Enum):
    RECEIVED = "received"
    AUTO_REJECTED_BLANK = "auto_rejected_blank"
    PENDING_REVIEW = "pending_review"
    ACCEPTED = "accepted"
    REJECTED = "rejected"


_EDGES = {
    ItemState.RECEIVED: {ItemState.AUTO_REJECTED_BLANK, ItemState.PENDING_REVIEW},
    ItemState.PENDING_REVIEW: {ItemState.ACCEPTED, ItemState.REJECTED},
    ItemState.AUTO_REJECTED_BLANK: set(),
    ItemState.ACCEPTED: set(),
    ItemState.REJECTED: set(),
}


class InvalidTransition(ValueError):
    pass


class InvalidMetadata(ValueError):
    pass


class UnknownItem(KeyError):
    pass


class DuplicateAudio(ValueError):
    pass


@dataclass(frozen=True)
class TimingRecord:
    task: str
    seconds: float
    phase: str

    def __post_init__(self):
        if self.task not in TASKS:
            raise ValueError(f"unknown task {self.task!r}")
        if self.phase not in PHASES:
            raise ValueError(f"unknown phase {self.phase!r}")
        if not self.seconds > 0:
            raise ValueError("seconds must be positive")


@dataclass(frozen=True)
class TranscriptionOutcome:
    kind: str
    assistance: str | None = None

    def __post_init__(self):
        if self.kind not in OUTCOME_KINDS:
            raise ValueError(f"unknown outcome kind {self.kind!r}")
        if self.kind == "skipped":
            if self.assistance is not None:
                raise ValueError("skipped transcription cannot carry an assistance level")
        else:
            if self.assistance not in ASSISTANCE_LEVELS:
                raise ValueError("gist/full transcription needs an assistance level")


@dataclass(frozen=True)
class ModeratorDecision:
    action: str  # accept | reject
    transcription_outcome: TranscriptionOutcome
    moderator_id: str
    decided_at: str  # ISO timestamp
    rejection_reason: str | None = None

    def __post_init__(self):
        if self.action not in ("accept", "reject"):
            raise ValueError(f"unknown action {self.action!r}")
        if self.action == "reject" and self.rejection_reason not in REJECTION_REASONS:
            raise ValueError("reject requires a rejection reason")


@dataclass(frozen=True)
class ItemMetadata:
    gender: str = "unmarked"
    state: str | None = None
    district: str | None = None
    sub_district: str | None = None
    village: str | None = None
    tags: tuple[str, ...] = ()
    rating: int | None = None
    title: str | None = None
    transcription_text: str | None = None

    def __post_init__(self):
        if self.gender not in GENDERS:
            raise ValueError(f"unknown gender {self.gender!r}")
        if self.rating is not None and not (1 <= self.rating <= 5):
            raise ValueError("rating must be in [1, 5]")
        object.__setattr__(self, "tags", tuple(self.tags))


@dataclass(frozen=True)
class TagRegistry:
    tags: frozenset[str]
    allow_free_text: bool = False

    def validate(self, tags) -> None:
        if self.allow_free_text:
            return
        unknown = [t for t in tags if t not in self.tags]
        if unknown:
            raise InvalidMetadata(f"tags not in registry: {unknown}")


@dataclass(frozen=True)
class ModerationItem:
    id: str
    audio_ref: str
    duration_s: float
    state: ItemState = ItemState.RECEIVED
    rejection_reason: str | None = None
    predictions: dict[str, Prediction] = field(default_factory=dict)
    stt: Transcript | None = None
    locations: tuple[LocationMatch, ...] = ()
    categories: tuple[tuple[str, int], ...] = ()
    metadata: ItemMetadata = field(default_factory=ItemMetadata)
    decision: ModeratorDecision | None = None
    timings: tuple[TimingRecord, ...] = ()
    warnings: tuple[str, ...] = ()

    def __post_init__(self):
        terminal_reject = self.state in (ItemState.AUTO_REJECTED_BLANK, ItemState.REJECTED)
        if terminal_reject and self.rejection_reason not in REJECTION_REASONS:
            raise ValueError(f"state {self.state.value} requires a rejection reason")
        if not terminal_reject and self.rejection_reason is not None:
            raise ValueError(f"state {self.state.value} cannot carry a rejection reason")
        if self.state == ItemState.AUTO_REJECTED_BLANK and self.rejection_reason != "blank":
            raise ValueError("auto-rejection reason must be blank")
        moderated = self.state in (ItemState.ACCEPTED, ItemState.REJECTED)
        if moderated != (self.decision is not None):
            raise ValueError("decision present iff the item was moderated to a terminal state")


def _checked(item: ModerationItem, new_state: ItemState) -> None:
    if new_state not in _EDGES[item.state]:
        raise InvalidTransition(f"{item.state.value} -> {new_state.value} is not a legal edge")


def audio_content_hash(clip: AudioClip) -> str:
    """Content hash over the canonical 16-bit PCM rendering plus the rate."""
    ints = np.clip(np.rint(clip.samples * 32768.0), -32768, 32767).astype("<i2")
    digest = hashlib.sha256()
    digest.update(str(clip.sample_rate).encode())
    digest.update(ints.tobytes())
    return digest.hexdigest()


class ModerationStore:
    """In-memory item registry: id allocation, duplicate detection, lookup.

    Not thread-safe on its own; the service serializes writers. Ids are
    monotonic six-digit strings that wrap at 999999 with a collision check.
    """

    ID_SPACE = 1_000_000

    def __init__(self):
        self.items: dict[str, ModerationItem] = {}
        self.hashes: dict[str, str] = {}  # content hash -> item id
        self._next = 1

    def allocate_id(self) -> str:
        for _ in range(self.ID_SPACE):
            candidate = f"{self._next % self.ID_SPACE:06d}"
            self._next += 1
            if candidate not in self.items:
                return candidate
        raise RuntimeError("item id space exhausted")

    def ingest_item(self, audio_ref: str, clip: AudioClip) -> ModerationItem:
        content = audio_content_hash(clip)
        if content in self.hashes:
            raise DuplicateAudio(f"audio already ingested as item {self.hashes[content]}")
        item = ModerationItem(id=self.allocate_id(), audio_ref=audio_ref, duration_s=clip.duration_s)
        self.items[item.id] = item
        self.hashes[content] = item.id
        return item

    def get(self, item_id: str) -> ModerationItem:
        try:
            return self.items[item_id]
        except KeyError:
            raise UnknownItem(item_id) from None

    def put(self, item: ModerationItem) -> None:
        self.items[item.id] = item

    def record_timing(self, item_id: str, record: TimingRecord) -> ModerationItem:
        item = self.get(item_id)
        updated = replace(item, timings=item.timings + (record,))
        self.put(updated)
        return updated


def auto_triage(
    item: ModerationItem,
    clip: AudioClip | None,
    blank_model,
    gender_model=None,
    reject_threshold: float = DEFAULT_REJECT_THRESHOLD,
    gender_floor: float = DEFAULT_GENDER_FLOOR,
    features: FeatureVector136 | None = None,
) -> tuple[ModerationItem, FeatureVector136 | None]:
    """Route a received item: auto-reject confident blanks, else queue it.

    The rejectable label is the blank model's first label. Degenerate audio
    (shorter than one frame, so no features) is auto-rejected outright.
    Returns the updated item and the computed features (None when
    degenerate) so callers can reuse them for feedback export.
    """
    if item.state != ItemState.RECEIVED:
        raise InvalidTransition(f"cannot triage an item in state {item.state.value}")
    if features is None and clip is not None:
        try:
            features = clip_features(clip)
        except ClipTooShort:
            features = None
    if features is None:
        _checked(item, ItemState.AUTO_REJECTED_BLANK)
        return (
            replace(item, state=ItemState.AUTO_REJECTED_BLANK, rejection_reason="blank"),
            None,
        )
    blank_pred = blank_model.predict(features)
    blank_label = blank_model.label_set[0]
    predictions = {"blank": blank_pred}
    if blank_pred.label == blank_label and blank_pred.confidence >= reject_threshold:
        _checked(item, ItemState.AUTO_REJECTED_BLANK)
        updated = replace(
            item,
            state=ItemState.AUTO_REJECTED_BLANK,
            rejection_reason="blank",
            predictions=predictions,
        )
        return updated, features
    metadata = item.metadata
    if gender_model is not None:
        gender_pred = gender_model.predict(features)
        predictions["gender"] = gender_pred
        if gender_pred.confidence >= gender_floor:
            metadata = replace(metadata, gender=gender_pred.label)
    _checked(item, ItemState.PENDING_REVIEW)
    updated = replace(
        item, state=ItemState.PENDING_REVIEW, predictions=predictions, metadata=metadata
    )
    return updated, features


def _merge_metadata(prefill: ItemMetadata, submitted: ItemMetadata) -> ItemMetadata:
    """Moderator submission wins; optional fields left None keep the prefill."""
    return ItemMetadata(
        gender=submitted.gender,
        state=submitted.state if submitted.state is not None else prefill.state,
        district=submitted.district if submitted.district is not None else prefill.district,
        sub_district=(
            submitted.sub_district if submitted.sub_district is not None else prefill.sub_district
        ),
        village=submitted.village if submitted.village is not None else prefill.village,
        tags=submitted.tags if submitted.tags else prefill.tags,
        rating=submitted.rating if submitted.rating is not None else prefill.rating,
        title=submitted.title if submitted.title is not None else prefill.title,
        transcription_text=(
            submitted.transcription_text
            if submitted.transcription_text is not None
            else prefill.transcription_text
        ),
    )


def apply_decision(
    item: ModerationItem,
    decision: ModeratorDecision,
    metadata: ItemMetadata,
    registry: TagRegistry | None = None,
) -> ModerationItem:
    """Moderator verdict on a pending item; moderator metadata overwrites prefills."""
    if item.state != ItemState.PENDING_REVIEW:
        raise InvalidTransition(f"cannot decide an item in state {item.state.value}")
    if decision.action == "reject" and decision.rejection_reason is None:
        raise InvalidMetadata("reject requires a rejection reason")
    if metadata.rating is not None and not (1 <= metadata.rating <= 5):
        raise InvalidMetadata("rating must be in [1, 5]")
    if registry is not None:
        registry.validate(metadata.tags)
    new_state = ItemState.ACCEPTED if decision.action == "accept" else ItemState.REJECTED
    _checked(item, new_state)
    return replace(
        item,
        state=new_state,
        rejection_reason=decision.rejection_reason if decision.action == "reject" else None,
        metadata=_merge_metadata(item.metadata, metadata),
        decision=decision,
    )
