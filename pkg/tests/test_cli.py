import json
from pathlib import Path

import pytest
from click.testing import CliRunner

from voxmod.audio import encode_wav
from voxmod.cli import main
from voxmod.service.scenario import DEFAULT_SCENARIO, run_scenario
from voxmod.synth import speech_clip

from conftest import tone


@pytest.fixture
def runner():
    return CliRunner()


class TestBasicCommands:
    def test_wer_command(self, runner, tmp_path):
        ref = tmp_path / "ref.txt"
        hyp = tmp_path / "hyp.txt"
        ref.write_text("a b c")
        hyp.write_text("a x c d")
        result = runner.invoke(main, ["wer", str(ref), str(hyp)])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert doc["wer"] == pytest.approx(2 / 3, abs=1e-9)
        assert doc["substitutions"] == 1 and doc["insertions"] == 1

    def test_cost_report_command(self, runner):
        result = runner.invoke(main, ["cost-report"])
        assert result.exit_code == 0, result.output
        assert "8.33" in result.output
        assert "5.00" in result.output or "4.9" in result.output
        assert "17" in result.output

    def test_extract_locations_command(self, runner, tmp_path):
        txt = tmp_path / "t.txt"
        txt.write_text("hum east champaran ke rahne wale hain")
        result = runner.invoke(main, ["extract-locations", str(txt)])
        assert result.exit_code == 0, result.output
        matches = json.loads(result.output)
        assert any(m["district"] == "Purbi Champaran" and m["state"] == "Bihar" for m in matches)

    def test_features_command(self, runner, tmp_path, rng):
        wav = tmp_path / "t.wav"
        wav.write_bytes(encode_wav(speech_clip("cli", rng, duration_s=1.0)))
        result = runner.invoke(main, ["features", str(wav)])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert set(doc["features"]) >= {"zcr", "energy", "mfcc_1", "chroma_deviation"}
        assert set(doc["features"]["zcr"]) == {"q1", "q2", "q3", "q4"}

    def test_features_csv_with_mel(self, runner, tmp_path):
        wav = tmp_path / "t.wav"
        wav.write_bytes(encode_wav(tone(800.0, duration_s=0.5)))
        result = runner.invoke(main, ["features", str(wav), "--format", "csv", "--mel"])
        assert result.exit_code == 0, result.output
        lines = result.output.strip().splitlines()
        assert lines[0] == "index,feature,quartile,value"
        assert len([l for l in lines if l.startswith("mel_")]) == 64

    def test_config_file_and_env_override(self, runner, tmp_path, monkeypatch):
        cfg = tmp_path / "vox.toml"
        cfg.write_text('data_dir = "/tmp/from-file"\nblank_reject_threshold = 0.8\n')
        monkeypatch.setenv("VOXMOD_BLANK_REJECT_THRESHOLD", "0.95")
        from voxmod.service import load_config

        config = load_config(cfg)
        assert config.data_dir == "/tmp/from-file"
        assert config.blank_reject_threshold == 0.95


class TestTrainCommands:
    def test_train_blank_small(self, runner, tmp_path):
        out = tmp_path / "blank.model"
        result = runner.invoke(
            main,
            ["train-blank", "--clips-per-class", "20", "--rfe-target", "24",
             "--drop-per-round", "40", "--n-trees", "10", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        assert out.exists()
        metrics = json.loads((tmp_path / "blank.model.metrics.json").read_text())
        assert metrics["selected_features"] == 24
        from voxmod.classify import load_model

        model = load_model(out.read_bytes())
        assert len(model.feature_mask) == 24

    def test_train_gender_small(self, runner, tmp_path):
        out = tmp_path / "gender.model"
        result = runner.invoke(
            main,
            ["train-gender", "--clips-per-class", "15", "--rfe-target", "136", "--out", str(out)],
        )
        assert result.exit_code == 0, result.output
        assert out.exists()

    def test_classify_command(self, runner, tmp_path, rng):
        model_path = tmp_path / "blank.model"
        result = runner.invoke(
            main,
            ["train-blank", "--clips-per-class", "15", "--rfe-target", "136",
             "--n-trees", "8", "--out", str(model_path)],
        )
        assert result.exit_code == 0, result.output
        wav = tmp_path / "probe.wav"
        wav.write_bytes(encode_wav(speech_clip("probe", rng, duration_s=1.0)))
        result = runner.invoke(main, ["classify", str(wav), "--blank-model", str(model_path)])
        assert result.exit_code == 0, result.output
        doc = json.loads(result.output)
        assert doc["blank"]["label"] in ("blank", "accepted")
        assert 0.5 <= doc["blank"]["confidence"] <= 1.0


class TestScenario:
    def test_small_scenario_deterministic(self, tmp_path):
        scenario = dict(DEFAULT_SCENARIO)
        scenario.update(
            n_items=10, train_clips_per_class=12, forest_trees=8, duration_range=[10.0, 50.0]
        )
        a = run_scenario(scenario, tmp_path / "da", tmp_path / "oa")
        b = run_scenario(scenario, tmp_path / "db", tmp_path / "ob")
        assert a["replay_ok"] and b["replay_ok"]
        assert a["state_hash"] == b["state_hash"]
        for name in a["reports"]:
            assert (tmp_path / "oa" / name).read_bytes() == (tmp_path / "ob" / name).read_bytes()

    def test_simulate_command(self, runner, tmp_path):
        scenario_path = tmp_path / "s.json"
        scenario_path.write_text(
            json.dumps(
                {"n_items": 6, "train_clips_per_class": 10, "forest_trees": 6,
                 "duration_range": [10.0, 30.0]}
            )
        )
        result = runner.invoke(
            main,
            ["--data-dir", str(tmp_path / "sim-data"), "simulate", str(scenario_path),
             "--out", str(tmp_path / "sim-out")],
        )
        assert result.exit_code == 0, result.output
        summary = json.loads((tmp_path / "sim-out" / "summary.json").read_text())
        assert summary["replay_ok"]
        assert (tmp_path / "sim-out" / "cost_report.json").exists()
