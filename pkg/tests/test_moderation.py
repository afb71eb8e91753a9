import numpy as np
import pytest

from voxmod.audio import AudioClip
from voxmod.classify import LabeledDataset, train_random_forest, train_linear_svm
from voxmod.moderation import (
    DuplicateAudio,
    InvalidMetadata,
    InvalidTransition,
    ItemMetadata,
    ItemState,
    ModerationStore,
    ModeratorDecision,
    TagRegistry,
    TimingRecord,
    TranscriptionOutcome,
    UnknownItem,
    apply_decision,
    auto_triage,
)
from voxmod.synth import blank_clip, blank_speech_corpus, corpus_dataset, speech_clip


@pytest.fixture(scope="module")
def models():
    corpus = blank_speech_corpus(30, 30, seed=100)
    data = corpus_dataset(corpus, ("blank", "accepted"))
    blank_model = train_random_forest(data, n_trees=15, seed=0)
    from voxmod.synth import gender_corpus

    gdata = corpus_dataset(gender_corpus(25, 25, seed=200), ("male", "female"))
    gender_model = train_linear_svm(gdata, seed=0)
    return blank_model, gender_model


def make_decision(action="accept", reason=None, kind="gist", assistance="partial"):
    outcome = (
        TranscriptionOutcome(kind="skipped")
        if kind == "skipped"
        else TranscriptionOutcome(kind=kind, assistance=assistance)
    )
    return ModeratorDecision(
        action=action,
        rejection_reason=reason,
        transcription_outcome=outcome,
        moderator_id="mod-1",
        decided_at="2024-03-01T10:00:00Z",
    )


class TestIngest:
    def test_first_id_and_state(self, rng):
        store = ModerationStore()
        clip = blank_clip("a", rng)
        item = store.ingest_item("blob/a.wav", clip)
        assert item.id == "000001"
        assert item.state == ItemState.RECEIVED
        assert item.duration_s == pytest.approx(clip.duration_s)

    def test_ids_monotonic_zero_padded(self, rng):
        store = ModerationStore()
        ids = [store.ingest_item(f"r{i}", speech_clip(f"c{i}", rng)).id for i in range(3)]
        assert ids == ["000001", "000002", "000003"]

    def test_duplicate_audio_rejected(self, rng):
        store = ModerationStore()
        clip = speech_clip("x", rng)
        store.ingest_item("first", clip)
        with pytest.raises(DuplicateAudio):
            store.ingest_item("second", clip)

    def test_id_wraparound_skips_taken(self, rng):
        store = ModerationStore()
        first = store.ingest_item("a", blank_clip("a", rng))
        store._next = ModerationStore.ID_SPACE  # force wrap to 000000
        second = store.ingest_item("b", speech_clip("b", rng))
        assert second.id == "000000"
        third = store.ingest_item("c", speech_clip("c", rng, duration_s=1.5))
        assert third.id == "000002"  # 000001 already taken
        assert first.id == "000001"


class TestAutoTriage:
    def test_blank_clip_auto_rejected(self, models, rng):
        blank_model, _ = models
        store = ModerationStore()
        item = store.ingest_item("a", blank_clip("a", rng))
        updated, features = auto_triage(item, blank_clip("a", rng), blank_model)
        assert updated.state in (ItemState.AUTO_REJECTED_BLANK, ItemState.PENDING_REVIEW)
        if updated.state == ItemState.AUTO_REJECTED_BLANK:
            assert updated.rejection_reason == "blank"

    def test_speech_clip_queued_with_predictions(self, models, rng):
        blank_model, gender_model = models
        store = ModerationStore()
        clip = speech_clip("s", rng)
        item = store.ingest_item("s", clip)
        updated, features = auto_triage(item, clip, blank_model, gender_model)
        assert updated.state == ItemState.PENDING_REVIEW
        assert "blank" in updated.predictions
        assert "gender" in updated.predictions
        assert features is not None

    def test_low_confidence_blank_goes_to_review(self, models, rng):
        blank_model, _ = models
        store = ModerationStore()
        clip = speech_clip("s2", rng)
        item = store.ingest_item("s2", clip)
        # threshold 1.01 is unreachable: nothing can be auto-rejected
        updated, _ = auto_triage(item, clip, blank_model, reject_threshold=1.01)
        assert updated.state == ItemState.PENDING_REVIEW

    def test_degenerate_clip_auto_rejected(self, models):
        blank_model, _ = models
        store = ModerationStore()
        tiny = AudioClip(id="t", samples=np.zeros(320), sample_rate=8000)
        item = store.ingest_item("t", tiny)
        updated, features = auto_triage(item, tiny, blank_model)
        assert updated.state == ItemState.AUTO_REJECTED_BLANK
        assert features is None

    def test_triage_twice_rejected(self, models, rng):
        blank_model, _ = models
        store = ModerationStore()
        clip = speech_clip("s3", rng)
        item = store.ingest_item("s3", clip)
        updated, _ = auto_triage(item, clip, blank_model)
        with pytest.raises(InvalidTransition):
            auto_triage(updated, clip, blank_model)

    def test_gender_prefill_respects_floor(self, models, rng):
        blank_model, gender_model = models
        store = ModerationStore()
        clip = speech_clip("s4", rng)
        item = store.ingest_item("s4", clip)
        updated, _ = auto_triage(item, clip, blank_model, gender_model, gender_floor=1.01)
        if updated.state == ItemState.PENDING_REVIEW:
            assert updated.metadata.gender == "unmarked"  # floor unreachable


def pending_item(rng, models, store=None):
    blank_model, _ = models
    store = store or ModerationStore()
    clip = speech_clip(f"p{rng.integers(1e9)}", rng)
    item = store.ingest_item(clip.id, clip)
    updated, _ = auto_triage(item, clip, blank_model, reject_threshold=1.01)
    store.put(updated)
    return store, updated


class TestApplyDecision:
    def test_accept_with_outcome(self, models, rng):
        _, item = pending_item(rng, models)
        decided = apply_decision(item, make_decision(), ItemMetadata(gender="female", rating=4))
        assert decided.state == ItemState.ACCEPTED
        assert decided.decision.transcription_outcome.kind == "gist"
        assert decided.metadata.gender == "female"

    def test_decision_on_auto_rejected_invalid(self, models, rng):
        blank_model, _ = models
        store = ModerationStore()
        tiny = AudioClip(id="t", samples=np.zeros(100), sample_rate=8000)
        item = store.ingest_item("t", tiny)
        rejected, _ = auto_triage(item, tiny, blank_model)
        with pytest.raises(InvalidTransition):
            apply_decision(rejected, make_decision(), ItemMetadata())

    def test_reject_without_reason_blocked(self, models, rng):
        _, item = pending_item(rng, models)
        with pytest.raises(ValueError):
            make_decision(action="reject", reason=None)

    def test_moderator_overwrites_prefill(self, models, rng):
        _, item = pending_item(rng, models)
        submitted = ItemMetadata(gender="third_gender", state="Bihar", rating=5)
        decided = apply_decision(item, make_decision(), submitted)
        assert decided.metadata.gender == "third_gender"
        assert decided.metadata.state == "Bihar"
        assert decided.metadata.rating == 5

    def test_unsupplied_fields_keep_prefill(self, models, rng):
        from dataclasses import replace

        _, item = pending_item(rng, models)
        prefilled = replace(item, metadata=ItemMetadata(state="Jharkhand", district="Ranchi"))
        decided = apply_decision(prefilled, make_decision(), ItemMetadata(rating=3))
        assert decided.metadata.state == "Jharkhand"
        assert decided.metadata.district == "Ranchi"
        assert decided.metadata.rating == 3

    def test_tag_registry_enforced(self, models, rng):
        _, item = pending_item(rng, models)
        registry = TagRegistry(tags=frozenset({"health", "song"}))
        with pytest.raises(InvalidMetadata):
            apply_decision(
                item, make_decision(), ItemMetadata(tags=("madeup",)), registry=registry
            )
        ok = apply_decision(item, make_decision(), ItemMetadata(tags=("song",)), registry=registry)
        assert ok.metadata.tags == ("song",)

    def test_outcome_invariant(self):
        with pytest.raises(ValueError):
            TranscriptionOutcome(kind="skipped", assistance="full")
        with pytest.raises(ValueError):
            TranscriptionOutcome(kind="gist")


class TestTimings:
    def test_append(self, models, rng):
        store, item = pending_item(rng, models)
        record = TimingRecord(task="transcription", seconds=81.6, phase="without_automation")
        updated = store.record_timing(item.id, record)
        assert updated.timings == (record,)

    def test_zero_seconds_rejected(self):
        with pytest.raises(ValueError):
            TimingRecord(task="triage", seconds=0.0, phase="with_automation")

    def test_unknown_item(self):
        store = ModerationStore()
        with pytest.raises(UnknownItem):
            store.record_timing("999999", TimingRecord("triage", 1.0, "with_automation"))


class TestStateMachineProperties:
    """Random operation interleavings never produce an illegal state."""

    def test_random_sequences(self, models):
        blank_model, _ = models
        rng = np.random.default_rng(12345)
        legal_edges = {
            (ItemState.RECEIVED, ItemState.AUTO_REJECTED_BLANK),
            (ItemState.RECEIVED, ItemState.PENDING_REVIEW),
            (ItemState.PENDING_REVIEW, ItemState.ACCEPTED),
            (ItemState.PENDING_REVIEW, ItemState.REJECTED),
        }
        for trial in range(300):
            store = ModerationStore()
            clip = speech_clip(f"t{trial}", rng, duration_s=1.0)
            item = store.ingest_item(clip.id, clip)
            visited = [item.state]
            for _ in range(int(rng.integers(1, 6))):
                op = rng.integers(0, 4)
                before = store.get(item.id).state
                try:
                    if op == 0:
                        new, _ = auto_triage(
                            store.get(item.id), clip, blank_model,
                            reject_threshold=float(rng.uniform(0.4, 1.0)),
                        )
                        store.put(new)
                    elif op == 1:
                        decided = apply_decision(
                            store.get(item.id),
                            make_decision(
                                action="reject" if rng.random() < 0.5 else "accept",
                                reason="noisy" if rng.random() < 0.5 else "editorial",
                            ),
                            ItemMetadata(),
                        )
                        store.put(decided)
                    elif op == 2:
                        store.record_timing(
                            item.id,
                            TimingRecord("metadata", float(rng.uniform(0.1, 9)), "with_automation"),
                        )
                    else:
                        store.get(item.id)
                except (InvalidTransition, InvalidMetadata):
                    assert store.get(item.id).state == before  # failed ops mutate nothing
                    continue
                after = store.get(item.id).state
                if after != before:
                    assert (before, after) in legal_edges
                    visited.append(after)
            final = store.get(item.id)
            assert len(visited) == len(set(visited))  # never re-enters a state
            moderated = final.state in (ItemState.ACCEPTED, ItemState.REJECTED)
            assert (final.decision is not None) == moderated
