"""Command-line interface (installed as `vox`)."""

from __future__ import annotations

import json
from pathlib import Path

import click

from .analytics import CostParams, cost_report
from .audio import decode_wav, resample
from .classify import (
    evaluate,
    forest_trainer,
    recursive_feature_elimination,
    save_model,
    svm_trainer,
)
from .features import FEATURE_NAMES, clip_features, mel_spectrogram
from .service import build_pipeline, load_config
from .service.scenario import DEFAULT_SCENARIO, load_scenario, run_scenario
from .synth import blank_speech_corpus, corpus_dataset, gender_corpus
from .text.transcript import Transcript
from .text.wer import compute_wer


@click.group()
@click.option("--config", "config_path", type=click.Path(exists=True), default=None,
              help="TOML or JSON config file; VOXMOD_* env vars override it.")
@click.option("--data-dir", type=click.Path(), default=None, help="Override the data directory.")
@click.pass_context
def main(ctx, config_path, data_dir):
    """Moderation automation toolkit for voice forums."""
    config = load_config(config_path)
    if data_dir is not None:
        from dataclasses import replace

        config = replace(config, data_dir=data_dir)
    ctx.obj = config


def _load_clip(wav_path, target_rate):
    clip = decode_wav(Path(wav_path).read_bytes())
    return resample(clip, target_rate)


def _train_and_report(data, trainer, rfe_target, drop_per_round, seed, holdout=0.3):
    train_part, test_part = data.split(1.0 - holdout, seed=seed)
    mask = None
    if rfe_target and rfe_target < data.dim:
        mask = tuple(
            recursive_feature_elimination(
                trainer, train_part, target_k=rfe_target, drop_per_round=drop_per_round
            )
        )
    model = trainer(train_part, mask)
    report = evaluate(model, test_part)
    metrics = {
        "accuracy": report.accuracy,
        "false_negative_rate": report.false_negative_rate,
        "confusion": report.confusion.counts.tolist(),
        "labels": list(report.confusion.labels),
        "selected_features": len(model.feature_mask),
        "test_rows": len(test_part),
    }
    return model, metrics


@main.command("train-blank")
@click.option("--clips-per-class", default=300, show_default=True)
@click.option("--rfe-target", default=64, show_default=True)
@click.option("--drop-per-round", default=8, show_default=True)
@click.option("--n-trees", default=100, show_default=True)
@click.option("--max-depth", default=20, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", type=click.Path(), default="blank.model", show_default=True)
def train_blank(clips_per_class, rfe_target, drop_per_round, n_trees, max_depth, seed, out):
    """Train the blank/accepted forest on a synthetic corpus."""
    click.echo(f"generating {2 * clips_per_class} clips and extracting features...")
    data = corpus_dataset(
        blank_speech_corpus(clips_per_class, clips_per_class, seed=seed), ("blank", "accepted")
    )
    trainer = forest_trainer(n_trees=n_trees, max_depth=max_depth, seed=seed)
    model, metrics = _train_and_report(data, trainer, rfe_target, drop_per_round, seed)
    blob = save_model(model)
    Path(out).write_bytes(blob)
    Path(f"{out}.metrics.json").write_text(json.dumps(metrics, indent=2) + "\n")
    click.echo(json.dumps(metrics, indent=2))
    click.echo(f"model written to {out}")


@main.command("train-gender")
@click.option("--clips-per-class", default=200, show_default=True)
@click.option("--rfe-target", default=136, show_default=True,
              help="136 keeps every feature (identity selection).")
@click.option("--drop-per-round", default=8, show_default=True)
@click.option("--svm-c", default=1.0, show_default=True)
@click.option("--epochs", default=50, show_default=True)
@click.option("--seed", default=0, show_default=True)
@click.option("--out", type=click.Path(), default="gender.model", show_default=True)
def train_gender(clips_per_class, rfe_target, drop_per_round, svm_c, epochs, seed, out):
    """Train the male/female linear SVM on a synthetic corpus."""
    click.echo(f"generating {2 * clips_per_class} clips and extracting features...")
    data = corpus_dataset(
        gender_corpus(clips_per_class, clips_per_class, seed=seed), ("male", "female")
    )
    trainer = svm_trainer(C=svm_c, epochs=epochs, seed=seed)
    model, metrics = _train_and_report(data, trainer, rfe_target, drop_per_round, seed)
    blob = save_model(model)
    Path(out).write_bytes(blob)
    Path(f"{out}.metrics.json").write_text(json.dumps(metrics, indent=2) + "\n")
    click.echo(json.dumps(metrics, indent=2))
    click.echo(f"model written to {out}")


@main.command()
@click.argument("wav", type=click.Path(exists=True))
@click.option("--blank-model", type=click.Path(exists=True), required=False)
@click.option("--gender-model", type=click.Path(exists=True), required=False)
@click.pass_obj
def classify(config, wav, blank_model, gender_model):
    """Run the triage classifiers over one WAV file."""
    from .classify import load_model

    clip = _load_clip(wav, config.target_sample_rate)
    vector = clip_features(clip)
    out = {}
    for kind, path in (("blank", blank_model or config.blank_model_path),
                       ("gender", gender_model or config.gender_model_path)):
        if path:
            model = load_model(Path(path).read_bytes())
            pred = model.predict(vector)
            out[kind] = {"label": pred.label, "confidence": pred.confidence}
    if not out:
        raise click.UsageError("no model paths given (flags or config)")
    click.echo(json.dumps(out, indent=2))


@main.command()
@click.argument("wav", type=click.Path(exists=True))
@click.option("--format", "fmt", type=click.Choice(["json", "csv"]), default="json", show_default=True)
@click.option("--mel/--no-mel", default=False, help="Also emit the mel spectrogram.")
@click.pass_obj
def features(config, wav, fmt, mel):
    """Dump the 136-dim quartile feature vector (and optionally the mel
    spectrogram) for one WAV file."""
    clip = _load_clip(wav, config.target_sample_rate)
    vector = clip_features(clip)
    if fmt == "json":
        doc = {"clip": wav, "features": {}}
        for i, name in enumerate(FEATURE_NAMES):
            q = vector.values[4 * i : 4 * i + 4]
            doc["features"][name] = {"q1": q[0], "q2": q[1], "q3": q[2], "q4": q[3]}
        if mel:
            spec = mel_spectrogram(clip)
            doc["mel_spectrogram"] = {
                "n_mels": spec.n_mels, "fft_size": spec.fft_size, "hop": spec.hop,
                "matrix": spec.matrix.tolist(),
            }
        click.echo(json.dumps(doc, indent=2))
    else:
        click.echo("index,feature,quartile,value")
        for i, name in enumerate(FEATURE_NAMES):
            for qi, q in enumerate(("q1", "q2", "q3", "q4")):
                click.echo(f"{4 * i + qi},{name},{q},{vector.values[4 * i + qi]!r}")
        if mel:
            spec = mel_spectrogram(clip)
            for row in range(spec.n_mels):
                click.echo(f"mel_{row}," + ",".join(repr(v) for v in spec.matrix[row]))


@main.command("extract-locations")
@click.argument("txt", type=click.Path(exists=True))
@click.pass_obj
def extract_locations_cmd(config, txt):
    """Extract gazetteer locations from a transcript text file."""
    from .text.locations import MatchConfig, extract_locations
    from .text.gazetteer import load_gazetteer
    from .data import fixture_gazetteer

    if config.gazetteer_path:
        gazetteer = load_gazetteer(config.gazetteer_path, config.alias_path)
    else:
        gazetteer = fixture_gazetteer()
    text = Path(txt).read_text(encoding="utf-8")
    transcript = Transcript.from_text(text)
    cfg = MatchConfig(metric=config.entity_metric, max_window=config.entity_max_window)
    matches = extract_locations(transcript, gazetteer, cfg)
    click.echo(
        json.dumps(
            [
                {
                    "matched_text": m.matched_text,
                    "level": m.level,
                    "state": m.state,
                    "district": m.district,
                    "sub_district": m.sub_district,
                    "distance": m.distance,
                    "backfilled": list(m.backfilled),
                    "ambiguous": m.ambiguous,
                }
                for m in matches
            ],
            indent=2,
            ensure_ascii=False,
        )
    )


@main.command()
@click.argument("ref", type=click.Path(exists=True))
@click.argument("hyp", type=click.Path(exists=True))
def wer(ref, hyp):
    """Word error rate between a reference and a hypothesis text file."""
    reference = Path(ref).read_text(encoding="utf-8").split()
    hypothesis = Path(hyp).read_text(encoding="utf-8").split()
    result = compute_wer(reference, hypothesis)
    click.echo(
        json.dumps(
            {
                "wer": result.wer,
                "substitutions": result.substitutions,
                "insertions": result.insertions,
                "deletions": result.deletions,
                "reference_words": len(reference),
            },
            indent=2,
        )
    )


@main.command("cost-report")
@click.option("--monthly-salary", default=20000.0, show_default=True)
@click.option("--weekly-hours", default=48.0, show_default=True)
@click.option("--items-per-hour", default=15.0, show_default=True)
@click.option("--overhead-ratio", default=0.30, show_default=True)
@click.option("--stt-unit-price", default=0.29, show_default=True)
@click.option("--stt-overhead-ratio", default=0.30, show_default=True)
@click.option("--time-saving-ratio", default=0.40, show_default=True)
@click.option("--stt-flat-cost", default=1.45, show_default=True,
              help="Pre-averaged per-item STT cost; pass -1 to price by 15 s blocks.")
@click.option("--avg-duration", default=60.0, show_default=True)
def cost_report_cmd(monthly_salary, weekly_hours, items_per_hour, overhead_ratio,
                    stt_unit_price, stt_overhead_ratio, time_saving_ratio,
                    stt_flat_cost, avg_duration):
    """Print the per-item cost chain with intermediate values."""
    params = CostParams(
        monthly_salary=monthly_salary,
        weekly_hours=weekly_hours,
        items_per_hour=items_per_hour,
        overhead_ratio=overhead_ratio,
        stt_unit_price=stt_unit_price,
        stt_overhead_ratio=stt_overhead_ratio,
        time_saving_ratio=time_saving_ratio,
        stt_flat_cost=None if stt_flat_cost < 0 else stt_flat_cost,
    )
    report = cost_report(params, avg_duration)
    click.echo(f"per-item manual cost:          {report.per_item_manual_cost:8.2f}")
    click.echo(f"automated labor (after {time_saving_ratio:.0%} saving): {report.per_item_automated_labor_cost:8.2f}")
    click.echo(f"STT cost (incl. overhead):     {report.per_item_stt_cost:8.2f}")
    click.echo(f"total with automation:         {report.per_item_total_automated_cost:8.2f}")
    click.echo(f"cost saving:                   {report.cost_saving_ratio:8.1%}")


@main.command()
@click.argument("scenario", type=click.Path(exists=True), required=False)
@click.option("--out", type=click.Path(), default="./scenario-out", show_default=True)
@click.pass_obj
def simulate(config, scenario, out):
    """Replay a scripted moderation scenario and regenerate all reports."""
    doc = load_scenario(scenario) if scenario else dict(DEFAULT_SCENARIO)
    summary = run_scenario(doc, data_dir=config.data_dir, out_dir=out)
    click.echo(json.dumps(summary, indent=2, sort_keys=True))
    if not summary["replay_ok"]:
        raise click.ClickException("replayed state diverged from live state")


@main.command()
@click.option("--host", default="127.0.0.1", show_default=True)
@click.option("--port", default=8000, show_default=True)
@click.pass_obj
def serve(config, host, port):
    """Run the HTTP API."""
    import uvicorn

    from .service.api import create_app

    pipeline = build_pipeline(config)
    if pipeline.store.slot("blank") is None:
        click.echo("warning: no blank model installed; triage will fail until one is swapped in",
                   err=True)
    uvicorn.run(create_app(pipeline), host=host, port=port)


if __name__ == "__main__":
    main()
