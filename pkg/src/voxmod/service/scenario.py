"""Scripted end-to-end scenario: trains small models, ingests a synthetic
queue, triages, decides, and regenerates every report.

Everything derives from the scenario seed and a logical clock, so two runs
with the same scenario produce byte-identical event logs and reports; the
run also rebuilds state from its own event log and checks deep equality.
"""

from __future__ import annotations

import hashlib
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..analytics import CostParams
from ..audio import encode_wav
from ..classify import save_model, train_linear_svm, train_random_forest
from ..moderation import ItemMetadata, ItemState, ModeratorDecision, TimingRecord, TranscriptionOutcome
from ..synth import blank_clip, corpus_dataset, gender_corpus, speech_clip, blank_speech_corpus
from ..text.transcript import Transcript, Word
from .config import PipelineConfig
from ..analytics import NoData
from .providers import MockTranscriptionProvider
from .store import ServiceStore
from . import build_pipeline

CATEGORY_PHRASES = {
    "out-of-food": "ration khatam ho gaya food nahi hai",
    "out-of-cash": "paisa nahi hai majdoori ruki hai",
    "health-emergency": "hospital me doctor nahi hai",
    "stuck-in-city": "sheher me phasa hua hun train band hai",
}


@dataclass
class LogicalClock:
    """Deterministic ISO timestamps: start + one second per tick."""

    epoch_s: int = 1_700_000_000
    tick: int = 0

    def __call__(self) -> str:
        self.tick += 1
        from datetime import datetime, timezone

        stamp = datetime.fromtimestamp(self.epoch_s + self.tick, tz=timezone.utc)
        return stamp.isoformat()


DEFAULT_SCENARIO = {
    "seed": 7,
    "n_items": 50,
    "blank_ratio": 0.3,
    "transcript_ratio": 0.8,
    "accept_ratio": 0.75,
    "duration_range": [10.0, 130.0],
    "train_clips_per_class": 60,
    "forest_trees": 30,
}


def load_scenario(path) -> dict:
    doc = json.loads(Path(path).read_text(encoding="utf-8"))
    merged = dict(DEFAULT_SCENARIO)
    merged.update(doc)
    return merged


def _train_models(scenario: dict):
    n = scenario["train_clips_per_class"]
    blank_data = corpus_dataset(
        blank_speech_corpus(n, n, seed=scenario["seed"] + 1), ("blank", "accepted")
    )
    blank_model = train_random_forest(
        blank_data, n_trees=scenario["forest_trees"], seed=scenario["seed"]
    )
    gender_data = corpus_dataset(
        gender_corpus(n // 2, n // 2, seed=scenario["seed"] + 2), ("male", "female")
    )
    gender_model = train_linear_svm(gender_data, seed=scenario["seed"])
    return blank_model, gender_model


def _transcript_for(rng: np.random.Generator, gazetteer_names: list[str]) -> Transcript:
    district = gazetteer_names[int(rng.integers(0, len(gazetteer_names)))]
    category = list(CATEGORY_PHRASES)[int(rng.integers(0, len(CATEGORY_PHRASES)))]
    text = f"main {district} se bol raha hun {CATEGORY_PHRASES[category]}"
    words = tuple(
        Word(w, confidence=round(float(rng.uniform(0.4, 1.0)), 3)) for w in text.split()
    )
    return Transcript(words=words, language="hi", source="mock-asr")


def run_scenario(scenario: dict, data_dir, out_dir) -> dict:
    rng = np.random.default_rng(scenario["seed"])
    data_dir = Path(data_dir)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)

    blank_model, gender_model = _train_models(scenario)
    clock = LogicalClock()
    config = PipelineConfig(data_dir=str(data_dir), stt_provider="mock")
    provider = MockTranscriptionProvider()
    pipeline = build_pipeline(config, provider=provider, clock=clock)
    pipeline.store.install_model(
        "blank", blank_model, hashlib.sha256(save_model(blank_model)).hexdigest()
    )
    pipeline.store.install_model(
        "gender", gender_model, hashlib.sha256(save_model(gender_model)).hexdigest()
    )

    district_names = [name for name, _ in pipeline.gazetteer.names("district")]
    lo, hi = scenario["duration_range"]

    # -- build and ingest the queue -----------------------------------------
    ingested_ids = []
    for i in range(scenario["n_items"]):
        duration = float(rng.uniform(lo, hi))
        if rng.random() < scenario["blank_ratio"]:
            clip = blank_clip(f"q-blank-{i:03d}", rng, duration_s=duration)
        else:
            clip = speech_clip(f"q-speech-{i:03d}", rng, duration_s=duration)
            if rng.random() < scenario["transcript_ratio"]:
                provider.add_clip(clip, _transcript_for(rng, district_names))
        item = pipeline.ingest_bytes(encode_wav(clip), audio_ref=f"{clip.id}.wav")
        ingested_ids.append(item.id)
        pipeline.process_item(item.id)

    # -- scripted decisions with stopwatch notes -----------------------------
    pending = [
        item_id
        for item_id in ingested_ids
        if pipeline.store.moderation.get(item_id).state == ItemState.PENDING_REVIEW
    ]
    for item_id in pending:
        item = pipeline.store.moderation.get(item_id)
        phase = "with_automation" if rng.random() < 0.5 else "without_automation"
        accept = rng.random() < scenario["accept_ratio"]
        kind_roll = rng.random()
        if kind_roll < 0.55:
            outcome = TranscriptionOutcome(kind="gist", assistance=("none", "partial", "full")[int(rng.integers(0, 3))])
        elif kind_roll < 0.9:
            outcome = TranscriptionOutcome(kind="full", assistance=("none", "partial", "full")[int(rng.integers(0, 3))])
        else:
            outcome = TranscriptionOutcome(kind="skipped")
        stt_text = item.stt.text() if item.stt else ""
        transcription_text = None
        if outcome.kind != "skipped":
            words = stt_text.split() if stt_text else ["sunai", "nahi", "diya"]
            if words and rng.random() < 0.5:
                words = words[:-1] + ["badla"]  # light edit, drives WER export
            transcription_text = " ".join(words)
        decision = ModeratorDecision(
            action="accept" if accept else "reject",
            rejection_reason=None if accept else ("noisy", "inarticulate", "editorial")[int(rng.integers(0, 3))],
            transcription_outcome=outcome,
            moderator_id=f"mod-{1 + int(rng.integers(0, 4))}",
            decided_at=clock(),
        )
        metadata = ItemMetadata(
            gender=("female", "male")[int(rng.integers(0, 2))],
            rating=int(rng.integers(1, 6)),
            title=f"item {item_id}",
            transcription_text=transcription_text,
            tags=("grievance",),
        )
        base = item.duration_s
        timings = [
            TimingRecord("triage", round(float(rng.uniform(2, 10)), 1), phase),
            TimingRecord("metadata", round(float(rng.uniform(20, 70)), 1), phase),
        ]
        if outcome.kind != "skipped":
            scale = 1.0 if outcome.kind == "gist" else 3.0
            seconds = round(float(base * rng.uniform(0.8, 1.6) * scale + 20), 1)
            timings.append(TimingRecord("transcription", seconds, phase))
        pipeline.decide(item_id, decision, metadata, timings)

    # -- reports --------------------------------------------------------------
    reports: dict[str, str] = {}

    def emit(name: str, text: str):
        (out_dir / name).write_text(text, encoding="utf-8")
        reports[name] = hashlib.sha256(text.encode("utf-8")).hexdigest()

    for task in ("gist", "full", "metadata", "triage"):
        try:
            report = pipeline.time_saving_report(task)
            doc = {
                "task": task,
                "bins": {
                    label: {
                        "avg_time_saved_s": stats.avg_time_saved_s,
                        "avg_time_taken_s": stats.avg_time_taken_s,
                        "n_with": stats.n_with,
                        "n_without": stats.n_without,
                    }
                    for label, stats in report.bins.items()
                },
            }
            csv_lines = ["bin,avg_time_saved_s,avg_time_taken_s,n_with,n_without"]
            for label, stats in report.bins.items():
                saved = "" if stats.avg_time_saved_s is None else repr(stats.avg_time_saved_s)
                taken = "" if stats.avg_time_taken_s is None else repr(stats.avg_time_taken_s)
                csv_lines.append(f"{label},{saved},{taken},{stats.n_with},{stats.n_without}")
            emit(f"time_saving_{task}.csv", "\n".join(csv_lines) + "\n")
        except NoData:
            doc = {"task": task, "no_data": True}
        emit(f"time_saving_{task}.json", json.dumps(doc, indent=2, sort_keys=True) + "\n")

    cost = pipeline.cost_report(CostParams(stt_flat_cost=1.45))
    emit(
        "cost_report.json",
        json.dumps(
            {
                "per_item_manual_cost": cost.per_item_manual_cost,
                "per_item_automated_labor_cost": cost.per_item_automated_labor_cost,
                "per_item_stt_cost": cost.per_item_stt_cost,
                "per_item_total_automated_cost": cost.per_item_total_automated_cost,
                "cost_saving_ratio": cost.cost_saving_ratio,
            },
            indent=2,
            sort_keys=True,
        )
        + "\n",
    )

    emit(
        "dashboard.json",
        json.dumps(
            [
                {"state": c.state, "district": c.district, "category": c.category, "count": c.count}
                for c in pipeline.dashboard()
            ],
            indent=2,
            sort_keys=True,
        )
        + "\n",
    )

    try:
        export = pipeline.export_feedback()
        from ..classify import dataset_to_csv

        if export.blank is not None:
            emit("feedback_blank.csv", dataset_to_csv(export.blank))
        if export.gender is not None:
            emit("feedback_gender.csv", dataset_to_csv(export.gender))
    except NoData:
        pass

    emit("wer_export.csv", pipeline.wer_export())

    # -- replay check -----------------------------------------------------------
    live = pipeline.store.state_snapshot()
    rebuilt = ServiceStore.open(data_dir).state_snapshot()
    replay_ok = live == rebuilt
    state_hash = hashlib.sha256(
        json.dumps(live, sort_keys=True, separators=(",", ":")).encode("utf-8")
    ).hexdigest()

    summary = {
        "n_items": scenario["n_items"],
        "n_pending_decided": len(pending),
        "n_auto_rejected": sum(
            1
            for i in ingested_ids
            if pipeline.store.moderation.get(i).state == ItemState.AUTO_REJECTED_BLANK
        ),
        "events": pipeline.store.log._seq,
        "replay_ok": replay_ok,
        "state_hash": state_hash,
        "reports": dict(sorted(reports.items())),
    }
    emit("summary.json", json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return summary
