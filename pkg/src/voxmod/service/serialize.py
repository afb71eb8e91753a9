"""JSON codecs for the domain objects that travel through the event log
and the HTTP API. Encoding is lossless: floats keep their repr, so a
decode(encode(x)) round trip is exact and replayed state compares equal."""

from __future__ import annotations

from ..classify.common import Prediction
from ..moderation import (
    ItemMetadata,
    ItemState,
    ModerationItem,
    ModeratorDecision,
    TimingRecord,
    TranscriptionOutcome,
)
from ..text.locations import LocationMatch
from ..text.transcript import Transcript, Word


def prediction_to_json(p: Prediction) -> dict:
    return {"label": p.label, "confidence": p.confidence}


def prediction_from_json(doc: dict) -> Prediction:
    return Prediction(label=doc["label"], confidence=doc["confidence"])


def transcript_to_json(t: Transcript) -> dict:
    return {
        "language": t.language,
        "source": t.source,
        "words": [
            {"text": w.text, **({"confidence": w.confidence} if w.confidence is not None else {})}
            for w in t.words
        ],
    }


def transcript_from_json(doc: dict) -> Transcript:
    return Transcript(
        words=tuple(Word(text=w["text"], confidence=w.get("confidence")) for w in doc["words"]),
        language=doc.get("language", "hi"),
        source=doc.get("source", "provider"),
    )


def location_to_json(m: LocationMatch) -> dict:
    return {
        "matched_text": m.matched_text,
        "level": m.level,
        "state": m.state,
        "district": m.district,
        "sub_district": m.sub_district,
        "distance": m.distance,
        "start": m.start,
        "end": m.end,
        "backfilled": list(m.backfilled),
        "ambiguous": m.ambiguous,
    }


def location_from_json(doc: dict) -> LocationMatch:
    return LocationMatch(
        matched_text=doc["matched_text"],
        level=doc["level"],
        state=doc["state"],
        district=doc.get("district"),
        sub_district=doc.get("sub_district"),
        distance=doc.get("distance", 0),
        start=doc.get("start", 0),
        end=doc.get("end", 0),
        backfilled=tuple(doc.get("backfilled", ())),
        ambiguous=doc.get("ambiguous", False),
    )


def metadata_to_json(m: ItemMetadata) -> dict:
    return {
        "gender": m.gender,
        "state": m.state,
        "district": m.district,
        "sub_district": m.sub_district,
        "village": m.village,
        "tags": list(m.tags),
        "rating": m.rating,
        "title": m.title,
        "transcription_text": m.transcription_text,
    }


def metadata_from_json(doc: dict) -> ItemMetadata:
    return ItemMetadata(
        gender=doc.get("gender", "unmarked"),
        state=doc.get("state"),
        district=doc.get("district"),
        sub_district=doc.get("sub_district"),
        village=doc.get("village"),
        tags=tuple(doc.get("tags", ())),
        rating=doc.get("rating"),
        title=doc.get("title"),
        transcription_text=doc.get("transcription_text"),
    )


def outcome_to_json(o: TranscriptionOutcome) -> dict:
    return {"kind": o.kind, "assistance": o.assistance}


def outcome_from_json(doc: dict) -> TranscriptionOutcome:
    return TranscriptionOutcome(kind=doc["kind"], assistance=doc.get("assistance"))


def decision_to_json(d: ModeratorDecision) -> dict:
    return {
        "action": d.action,
        "rejection_reason": d.rejection_reason,
        "transcription_outcome": outcome_to_json(d.transcription_outcome),
        "moderator_id": d.moderator_id,
        "decided_at": d.decided_at,
    }


def decision_from_json(doc: dict) -> ModeratorDecision:
    return ModeratorDecision(
        action=doc["action"],
        rejection_reason=doc.get("rejection_reason"),
        transcription_outcome=outcome_from_json(doc["transcription_outcome"]),
        moderator_id=doc["moderator_id"],
        decided_at=doc["decided_at"],
    )


def timing_to_json(r: TimingRecord) -> dict:
    return {"task": r.task, "seconds": r.seconds, "phase": r.phase}


def timing_from_json(doc: dict) -> TimingRecord:
    return TimingRecord(task=doc["task"], seconds=doc["seconds"], phase=doc["phase"])


def item_to_json(item: ModerationItem) -> dict:
    return {
        "id": item.id,
        "audio_ref": item.audio_ref,
        "duration_s": item.duration_s,
        "state": item.state.value,
        "rejection_reason": item.rejection_reason,
        "predictions": {k: prediction_to_json(p) for k, p in item.predictions.items()},
        "stt": transcript_to_json(item.stt) if item.stt is not None else None,
        "locations": [location_to_json(m) for m in item.locations],
        "categories": [[c, n] for c, n in item.categories],
        "metadata": metadata_to_json(item.metadata),
        "decision": decision_to_json(item.decision) if item.decision is not None else None,
        "timings": [timing_to_json(r) for r in item.timings],
        "warnings": list(item.warnings),
    }


def item_from_json(doc: dict) -> ModerationItem:
    return ModerationItem(
        id=doc["id"],
        audio_ref=doc["audio_ref"],
        duration_s=doc["duration_s"],
        state=ItemState(doc["state"]),
        rejection_reason=doc.get("rejection_reason"),
        predictions={k: prediction_from_json(p) for k, p in doc.get("predictions", {}).items()},
        stt=transcript_from_json(doc["stt"]) if doc.get("stt") else None,
        locations=tuple(location_from_json(m) for m in doc.get("locations", ())),
        categories=tuple((c, n) for c, n in doc.get("categories", ())),
        metadata=metadata_from_json(doc.get("metadata", {})),
        decision=decision_from_json(doc["decision"]) if doc.get("decision") else None,
        timings=tuple(timing_from_json(r) for r in doc.get("timings", ())),
        warnings=tuple(doc.get("warnings", ())),
    )
