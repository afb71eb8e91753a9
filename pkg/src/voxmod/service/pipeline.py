"""Pipeline orchestration: ingest -> triage -> STT -> entities -> queue,
plus decisions, reports, feedback export, and atomic model swaps.

STT failure policy is degrade-not-block: provider errors become item
warnings and the item proceeds without a transcript.
"""

from __future__ import annotations

import csv
import io
from dataclasses import dataclass
from typing import Callable

import numpy as np

from ..analytics import (
    BinReport,
    CostParams,
    CostReport,
    DashboardCell,
    NoData,
    TimedTask,
    bin_time_report,
    cost_report,
    dashboard_aggregate,
)
from ..audio import AudioClip, ClipTooShort, decode_wav, resample
from ..classify import LabeledDataset, load_model
from ..features import N_QUARTILE_FEATURES, clip_features
from ..moderation import (
    ItemMetadata,
    ItemState,
    ModerationItem,
    ModeratorDecision,
    TagRegistry,
    TimingRecord,
    UnknownItem,
    apply_decision,
    auto_triage,
)
from ..text.categorize import CategoryRuleSet, categorize
from ..text.gazetteer import Gazetteer
from ..text.locations import MatchConfig, extract_locations
from ..text.transcript import low_confidence_spans
from ..text.wer import compute_wer
from .config import PipelineConfig
from .providers import ProviderError, TranscriptionProvider
from .store import ModelSlot, ServiceStore, utc_clock


class SmokeTestFailed(ValueError):
    pass


@dataclass
class FeedbackExport:
    blank: LabeledDataset | None
    gender: LabeledDataset | None


class ModerationPipeline:
    def __init__(
        self,
        config: PipelineConfig,
        store: ServiceStore,
        provider: TranscriptionProvider,
        gazetteer: Gazetteer,
        rules: CategoryRuleSet,
        tag_registry: TagRegistry | None = None,
        clock: Callable[[], str] = utc_clock,
    ):
        self.config = config
        self.store = store
        self.provider = provider
        self.gazetteer = gazetteer
        self.rules = rules
        self.tag_registry = tag_registry
        self.clock = clock
        self.match_config = MatchConfig(
            metric=config.entity_metric, max_window=config.entity_max_window
        )

    # -- models ------------------------------------------------------------

    def model(self, kind: str) -> ModelSlot | None:
        return self.store.slot(kind)

    def swap_model(self, kind: str, model_bytes: bytes) -> ModelSlot:
        """Validate, smoke-test, persist, and atomically install a model."""
        if kind not in ("blank", "gender"):
            raise ValueError(f"unknown model kind {kind!r}")
        model = load_model(model_bytes)  # CorruptModel on bad bytes
        try:
            probe = model.predict(np.zeros(N_QUARTILE_FEATURES))
            assert probe.label in model.label_set
            assert 0.0 <= probe.confidence <= 1.0
        except Exception as exc:
            raise SmokeTestFailed(f"{kind} model failed the smoke prediction: {exc}") from exc
        return self.store.commit_model_swap(kind, model_bytes, model)

    # -- item flow -----------------------------------------------------------

    def ingest_bytes(self, wav_bytes: bytes, audio_ref: str) -> ModerationItem:
        return self.store.ingest_wav(
            wav_bytes, audio_ref, target_rate=self.config.target_sample_rate
        )

    def _clip_for(self, item: ModerationItem) -> AudioClip:
        content = next(
            (h for h, item_id in self.store.moderation.hashes.items() if item_id == item.id), None
        )
        if content is None:
            raise UnknownItem(item.id)
        blob = self.store.blob_dir / f"{content}.wav"
        clip = decode_wav(blob.read_bytes())
        clip = AudioClip(id=item.id, samples=clip.samples, sample_rate=clip.sample_rate)
        return resample(clip, self.config.target_sample_rate)

    def process_item(self, item_id: str) -> ModerationItem:
        """Triage a received item; if queued, attach STT and entities.

        Concurrent workers may race on the same item: triage commits under
        the store lock with a state check, so exactly one wins and only the
        winner runs the downstream steps.
        """
        item = self.store.moderation.get(item_id)
        if item.state != ItemState.RECEIVED:
            return item
        clip = self._clip_for(item)
        blank_slot = self.store.slot("blank")
        if blank_slot is None:
            raise RuntimeError("no blank model installed")
        gender_slot = self.store.slot("gender")
        try:
            features = clip_features(clip)
        except ClipTooShort:
            features = None
        triaged, features = auto_triage(
            item,
            None,
            blank_slot.model,
            gender_slot.model if gender_slot else None,
            reject_threshold=self.config.blank_reject_threshold,
            gender_floor=self.config.gender_confidence_floor,
            features=features,
        )
        committed = self.store.commit_triage(item_id, triaged, features)
        if committed.state != ItemState.PENDING_REVIEW or committed.stt is not None:
            return committed  # auto-rejected, or another worker won the race
        transcript, warning = None, None
        try:
            transcript = self.provider.transcribe(clip, self.config.stt_language)
        except ProviderError as exc:
            warning = f"stt: {type(exc).__name__}: {exc}"
        committed = self.store.commit_transcript(item_id, transcript, warning)
        if transcript is not None:
            locations = extract_locations(transcript, self.gazetteer, self.match_config)
            categories = categorize(transcript, self.rules)
        else:
            locations, categories = [], []
        return self.store.commit_entities(item_id, locations, categories)

    def process_pending(self, worker_count: int | None = None) -> list[str]:
        """Run every received item through the pipeline on a worker pool.

        Pool size defaults to the configured worker count (0 = number of
        processing units). Workers race on state transitions, so items are
        triaged exactly once regardless of pool size.
        """
        from concurrent.futures import ThreadPoolExecutor

        received = [
            item_id
            for item_id, item in sorted(self.store.moderation.items.items())
            if item.state == ItemState.RECEIVED
        ]
        if not received:
            return []
        workers = worker_count or self.config.worker_count
        with ThreadPoolExecutor(max_workers=workers) as pool:
            list(pool.map(self.process_item, received))
        return received

    def decide(
        self,
        item_id: str,
        decision: ModeratorDecision,
        metadata: ItemMetadata,
        timings: list[TimingRecord] = (),
    ) -> ModerationItem:
        with self.store.lock:
            item = self.store.moderation.get(item_id)
            decided = apply_decision(item, decision, metadata, registry=self.tag_registry)
            committed = self.store.commit_decision(item_id, decided)
            for record in timings:
                committed = self.store.commit_timing(item_id, record)
            return committed

    def record_timing(self, item_id: str, record: TimingRecord) -> ModerationItem:
        return self.store.commit_timing(item_id, record)

    def spans_for(self, item: ModerationItem) -> list[tuple[int, int]]:
        if item.stt is None or not item.stt.has_confidences():
            return []
        return low_confidence_spans(item.stt, self.config.low_confidence_threshold)

    # -- reports ---------------------------------------------------------------

    def _timed_tasks(self) -> list[TimedTask]:
        rows: list[TimedTask] = []
        for item in self.store.moderation.items.values():
            outcome = item.decision.transcription_outcome if item.decision else None
            for record in item.timings:
                if record.task == "transcription":
                    if outcome is None or outcome.kind == "skipped":
                        continue
                    task = outcome.kind  # gist | full
                elif record.task == "edit":
                    continue
                else:
                    task = record.task
                rows.append(
                    TimedTask(
                        duration_s=item.duration_s,
                        task=task,
                        phase=record.phase,
                        seconds=record.seconds,
                    )
                )
        return rows

    def time_saving_report(self, task: str) -> BinReport:
        return bin_time_report(task, self._timed_tasks())

    def cost_report(self, params: CostParams | None = None) -> CostReport:
        params = params or CostParams()
        durations = [item.duration_s for item in self.store.moderation.items.values()]
        avg = sum(durations) / len(durations) if durations else 60.0
        return cost_report(params, avg)

    def dashboard(self) -> list[DashboardCell]:
        return dashboard_aggregate(list(self.store.moderation.items.values()))

    def wer_export(self) -> str:
        """CSV of (item id, WER vs the moderator transcript, transcription
        seconds) for items where both transcripts exist."""
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["item_id", "wer", "transcription_seconds"])
        for item_id, item in sorted(self.store.moderation.items.items()):
            manual = (item.metadata.transcription_text or "").split()
            if item.stt is None or not manual:
                continue
            hyp = [w.text for w in item.stt.words]
            seconds = sum(r.seconds for r in item.timings if r.task == "transcription")
            writer.writerow([item_id, f"{compute_wer(manual, hyp).wer:.4f}", f"{seconds:.1f}"])
        return buf.getvalue()

    # -- feedback export ----------------------------------------------------

    def export_feedback(self, since: str = "", until: str = "￿") -> FeedbackExport:
        """Per-classifier retraining datasets from moderator decisions.

        Rows where the decision contradicts the prediction are the hard
        examples; confirmations are included with a ':ok' id suffix so
        downstream tooling can tell them apart. Labels are the moderator
        ground truth.
        """
        blank_rows: list[tuple[str, str, list[float]]] = []
        gender_rows: list[tuple[str, str, list[float]]] = []
        decided = 0
        for item_id, item in sorted(self.store.moderation.items.items()):
            if item.decision is None:
                continue
            if not (since <= item.decision.decided_at < until):
                continue
            decided += 1
            features = self.store.features.get(item_id)
            if features is None:
                continue
            blank_pred = item.predictions.get("blank")
            if blank_pred is not None:
                truth = (
                    "blank"
                    if (item.state == ItemState.REJECTED and item.rejection_reason == "blank")
                    else "accepted"
                )
                marker = item_id if truth != blank_pred.label else f"{item_id}:ok"
                blank_rows.append((marker, truth, features))
            gender_pred = item.predictions.get("gender")
            if gender_pred is not None and item.metadata.gender in ("male", "female"):
                truth = item.metadata.gender
                marker = item_id if truth != gender_pred.label else f"{item_id}:ok"
                gender_rows.append((marker, truth, features))
        if decided == 0:
            raise NoData("no decided items in the window")

        def build(rows, label_set) -> LabeledDataset | None:
            if not rows:
                return None
            return LabeledDataset(
                X=np.array([r[2] for r in rows]),
                labels=tuple(r[1] for r in rows),
                clip_ids=tuple(r[0] for r in rows),
                label_set=label_set,
            )

        return FeedbackExport(
            blank=build(blank_rows, ("blank", "accepted")),
            gender=build(gender_rows, ("male", "female")),
        )
