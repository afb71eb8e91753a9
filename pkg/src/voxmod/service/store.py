"""Append-only JSONL event log and the event-sourced service store.

Every mutation is an event; applying the event is the only way state
changes, so replaying the log reconstructs the exact in-memory state.
Events carry post-state (the computed triage outcome, the merged metadata)
rather than inputs, which keeps replay free of business logic.

Crash safety: a torn trailing line (process killed mid-write) is detected
and discarded on startup; a corrupt line anywhere else is an error.
"""

from __future__ import annotations

import hashlib
import json
import threading
from dataclasses import dataclass, replace
from datetime import datetime, timezone
from pathlib import Path
from typing import Callable

from ..audio import decode_wav, resample
from ..classify import load_model
from ..moderation import (
    DuplicateAudio,
    ItemState,
    ModerationItem,
    ModerationStore,
    audio_content_hash,
)
from . import serialize

EVENT_KINDS = (
    "ingested",
    "triaged",
    "transcribed",
    "entities_extracted",
    "decided",
    "timing_recorded",
    "model_swapped",
)


class CorruptEventLog(ValueError):
    """Malformed event in the body of the log (not a torn tail)."""


@dataclass(frozen=True)
class EventRecord:
    seq: int
    at: str
    kind: str
    payload: dict


def utc_clock() -> str:
    return datetime.now(timezone.utc).isoformat()


class EventLog:
    """Single-writer JSONL log; callers serialize access."""

    def __init__(self, path, clock: Callable[[], str] = utc_clock):
        self.path = Path(path)
        self.clock = clock
        self._seq = 0
        self.path.parent.mkdir(parents=True, exist_ok=True)

    def append(self, kind: str, payload: dict) -> EventRecord:
        if kind not in EVENT_KINDS:
            raise ValueError(f"unknown event kind {kind!r}")
        self._seq += 1
        record = EventRecord(seq=self._seq, at=self.clock(), kind=kind, payload=payload)
        line = json.dumps(
            {"seq": record.seq, "at": record.at, "kind": record.kind, "payload": record.payload},
            separators=(",", ":"),
            ensure_ascii=False,
        )
        with self.path.open("a", encoding="utf-8") as f:
            f.write(line + "\n")
        return record

    @staticmethod
    def read(path) -> list[EventRecord]:
        path = Path(path)
        if not path.exists():
            return []
        raw_lines = path.read_text(encoding="utf-8").split("\n")
        if raw_lines and raw_lines[-1] == "":
            raw_lines.pop()
        events: list[EventRecord] = []
        for i, line in enumerate(raw_lines):
            try:
                doc = json.loads(line)
                record = EventRecord(
                    seq=doc["seq"], at=doc["at"], kind=doc["kind"], payload=doc["payload"]
                )
            except (json.JSONDecodeError, KeyError, TypeError) as exc:
                if i == len(raw_lines) - 1:
                    break  # torn tail from a crash mid-write: discard
                raise CorruptEventLog(f"unreadable event at line {i + 1}: {exc}") from exc
            if events and record.seq <= events[-1].seq:
                raise CorruptEventLog(f"non-monotonic seq at line {i + 1}")
            events.append(record)
        return events

    def resume_from(self, events: list[EventRecord]) -> None:
        self._seq = events[-1].seq if events else 0


@dataclass
class ModelSlot:
    """One immutable (model, version) pair; swapped as a whole so readers
    never observe a torn model."""

    kind: str
    model: object
    version: str


class ServiceStore:
    """Moderation state + model registry + content-addressed audio blobs,
    all driven by the event log."""

    def __init__(self, data_dir, clock: Callable[[], str] = utc_clock):
        self.data_dir = Path(data_dir)
        self.blob_dir = self.data_dir / "blobs"
        self.model_dir = self.data_dir / "models"
        self.blob_dir.mkdir(parents=True, exist_ok=True)
        self.model_dir.mkdir(parents=True, exist_ok=True)
        self.log = EventLog(self.data_dir / "events.jsonl", clock=clock)
        self.moderation = ModerationStore()
        self.features: dict[str, list[float]] = {}
        self.model_versions: dict[str, str] = {}
        self._slots: dict[str, ModelSlot] = {}
        self.lock = threading.RLock()

    # -- startup ---------------------------------------------------------

    @classmethod
    def open(cls, data_dir, clock: Callable[[], str] = utc_clock) -> "ServiceStore":
        store = cls(data_dir, clock=clock)
        events = EventLog.read(store.log.path)
        for event in events:
            store._apply(event)
        store.log.resume_from(events)
        return store

    # -- commands (append + apply under the store lock) -------------------

    def _commit(self, kind: str, payload: dict) -> EventRecord:
        record = self.log.append(kind, payload)
        self._apply(record)
        return record

    def ingest_wav(self, wav_bytes: bytes, audio_ref: str, target_rate: int = 8000) -> ModerationItem:
        clip = decode_wav(wav_bytes)
        clip = resample(replace_id(clip, audio_ref), target_rate)
        with self.lock:
            content = audio_content_hash(clip)
            if content in self.moderation.hashes:
                raise DuplicateAudio(
                    f"audio already ingested as item {self.moderation.hashes[content]}"
                )
            blob_name = f"{content}.wav"
            blob_path = self.blob_dir / blob_name
            if not blob_path.exists():
                blob_path.write_bytes(wav_bytes)
            item_id = self.moderation.allocate_id()
            self._commit(
                "ingested",
                {
                    "id": item_id,
                    "audio_ref": audio_ref,
                    "blob": blob_name,
                    "content_hash": content,
                    "duration_s": clip.duration_s,
                    "sample_rate": clip.sample_rate,
                },
            )
            return self.moderation.get(item_id)

    def commit_triage(
        self, item_id: str, triaged: ModerationItem, features
    ) -> ModerationItem:
        """Commit a computed triage outcome; loses the race (and returns the
        current item) if someone else triaged first."""
        with self.lock:
            current = self.moderation.get(item_id)
            if current.state != ItemState.RECEIVED:
                return current
            payload = {
                "id": item_id,
                "state": triaged.state.value,
                "rejection_reason": triaged.rejection_reason,
                "predictions": {
                    k: serialize.prediction_to_json(p) for k, p in triaged.predictions.items()
                },
                "gender_prefill": triaged.metadata.gender,
                "features": [float(v) for v in features.values] if features is not None else None,
            }
            self._commit("triaged", payload)
            return self.moderation.get(item_id)

    def commit_transcript(self, item_id: str, transcript, warning: str | None = None) -> ModerationItem:
        with self.lock:
            payload = {
                "id": item_id,
                "transcript": serialize.transcript_to_json(transcript) if transcript else None,
            }
            if warning:
                payload["warning"] = warning
            self._commit("transcribed", payload)
            return self.moderation.get(item_id)

    def commit_entities(self, item_id: str, locations, categories) -> ModerationItem:
        with self.lock:
            self._commit(
                "entities_extracted",
                {
                    "id": item_id,
                    "locations": [serialize.location_to_json(m) for m in locations],
                    "categories": [[c, n] for c, n in categories],
                },
            )
            return self.moderation.get(item_id)

    def commit_decision(self, item_id: str, decided: ModerationItem) -> ModerationItem:
        """Commit a decision already validated against the current item."""
        with self.lock:
            self._commit(
                "decided",
                {
                    "id": item_id,
                    "state": decided.state.value,
                    "rejection_reason": decided.rejection_reason,
                    "decision": serialize.decision_to_json(decided.decision),
                    "metadata": serialize.metadata_to_json(decided.metadata),
                },
            )
            return self.moderation.get(item_id)

    def commit_timing(self, item_id: str, record) -> ModerationItem:
        with self.lock:
            self.moderation.get(item_id)  # UnknownItem before logging
            self._commit(
                "timing_recorded", {"id": item_id, "record": serialize.timing_to_json(record)}
            )
            return self.moderation.get(item_id)

    def commit_model_swap(self, kind: str, model_bytes: bytes, model) -> ModelSlot:
        version = hashlib.sha256(model_bytes).hexdigest()
        file_name = f"{kind}-{version[:16]}.model"
        (self.model_dir / file_name).write_bytes(model_bytes)
        with self.lock:
            self._commit("model_swapped", {"kind": kind, "version": version, "file": file_name})
            slot = ModelSlot(kind=kind, model=model, version=version)
            self._slots[kind] = slot
            return slot

    def install_model(self, kind: str, model, version: str = "unversioned") -> ModelSlot:
        """Set a live model without logging (startup from config paths)."""
        slot = ModelSlot(kind=kind, model=model, version=version)
        self._slots[kind] = slot
        return slot

    def slot(self, kind: str) -> ModelSlot | None:
        return self._slots.get(kind)

    # -- event application -------------------------------------------------

    def _apply(self, event: EventRecord) -> None:
        payload = event.payload
        kind = event.kind
        if kind == "ingested":
            item = ModerationItem(
                id=payload["id"],
                audio_ref=payload["audio_ref"],
                duration_s=payload["duration_s"],
            )
            self.moderation.items[item.id] = item
            self.moderation.hashes[payload["content_hash"]] = item.id
            self.moderation._next = max(self.moderation._next, int(item.id) + 1)
        elif kind == "triaged":
            item = self.moderation.get(payload["id"])
            predictions = {
                k: serialize.prediction_from_json(p) for k, p in payload["predictions"].items()
            }
            metadata = replace(item.metadata, gender=payload.get("gender_prefill", "unmarked"))
            updated = replace(
                item,
                state=ItemState(payload["state"]),
                rejection_reason=payload.get("rejection_reason"),
                predictions=predictions,
                metadata=metadata,
            )
            self.moderation.put(updated)
            if payload.get("features") is not None:
                self.features[item.id] = list(payload["features"])
        elif kind == "transcribed":
            item = self.moderation.get(payload["id"])
            transcript = (
                serialize.transcript_from_json(payload["transcript"])
                if payload.get("transcript")
                else None
            )
            warnings = item.warnings
            if payload.get("warning"):
                warnings = warnings + (payload["warning"],)
            self.moderation.put(replace(item, stt=transcript, warnings=warnings))
        elif kind == "entities_extracted":
            item = self.moderation.get(payload["id"])
            self.moderation.put(
                replace(
                    item,
                    locations=tuple(
                        serialize.location_from_json(m) for m in payload["locations"]
                    ),
                    categories=tuple((c, n) for c, n in payload["categories"]),
                )
            )
        elif kind == "decided":
            item = self.moderation.get(payload["id"])
            self.moderation.put(
                replace(
                    item,
                    state=ItemState(payload["state"]),
                    rejection_reason=payload.get("rejection_reason"),
                    decision=serialize.decision_from_json(payload["decision"]),
                    metadata=serialize.metadata_from_json(payload["metadata"]),
                )
            )
        elif kind == "timing_recorded":
            item = self.moderation.get(payload["id"])
            record = serialize.timing_from_json(payload["record"])
            self.moderation.put(replace(item, timings=item.timings + (record,)))
        elif kind == "model_swapped":
            self.model_versions[payload["kind"]] = payload["version"]
            model_path = self.model_dir / payload["file"]
            if model_path.exists() and (
                self._slots.get(payload["kind"]) is None
                or self._slots[payload["kind"]].version != payload["version"]
            ):
                try:
                    model = load_model(model_path.read_bytes())
                except Exception:
                    return  # stale file; live slot untouched
                self._slots[payload["kind"]] = ModelSlot(
                    kind=payload["kind"], model=model, version=payload["version"]
                )
        else:
            raise CorruptEventLog(f"unknown event kind {kind!r}")

    # -- snapshots ---------------------------------------------------------

    def state_snapshot(self) -> dict:
        """Canonical JSON form of the full state (replay-equality checks)."""
        return {
            "items": {
                item_id: serialize.item_to_json(item)
                for item_id, item in sorted(self.moderation.items.items())
            },
            "hashes": dict(sorted(self.moderation.hashes.items())),
            "features": {k: list(v) for k, v in sorted(self.features.items())},
            "model_versions": dict(sorted(self.model_versions.items())),
        }


def replace_id(clip, new_id: str):
    from ..audio import AudioClip

    return AudioClip(id=new_id, samples=clip.samples, sample_rate=clip.sample_rate)
