"""Pipeline configuration: defaults, TOML/JSON file, env-var overrides."""

from __future__ import annotations

import json
import os

try:
    import tomllib
except ModuleNotFoundError:  # Python 3.10
    import tomli as tomllib

from dataclasses import dataclass, fields, replace
from pathlib import Path

ENV_PREFIX = "VOXMOD_"


@dataclass(frozen=True)
class PipelineConfig:
    data_dir: str = "./voxmod-data"
    target_sample_rate: int = 8000
    blank_reject_threshold: float = 0.9
    gender_confidence_floor: float = 0.75
    stt_language: str = "hi"
    stt_provider: str = "mock"  # mock | http | none
    stt_fixtures_dir: str | None = None
    stt_endpoint: str | None = None
    low_confidence_threshold: float = 0.7
    entity_metric: str = "levenshtein"
    entity_max_window: int = 3
    blank_model_path: str | None = None
    gender_model_path: str | None = None
    gazetteer_path: str | None = None  # packaged fixture when unset
    alias_path: str | None = None
    rules_path: str | None = None
    api_token: str | None = None
    workers: int = 0  # 0 = number of processing units

    def __post_init__(self):
        for name in ("blank_reject_threshold", "gender_confidence_floor", "low_confidence_threshold"):
            value = getattr(self, name)
            if not (0.0 <= value <= 1.0):
                raise ValueError(f"{name} must lie in [0, 1], got {value}")
        if self.target_sample_rate <= 0:
            raise ValueError("target_sample_rate must be positive")
        if self.stt_provider not in ("mock", "http", "none"):
            raise ValueError(f"unknown stt_provider {self.stt_provider!r}")

    @property
    def worker_count(self) -> int:
        return self.workers if self.workers > 0 else (os.cpu_count() or 1)


def _coerce(raw: str, target_type):
    if target_type is bool:
        return raw.lower() in ("1", "true", "yes", "on")
    if target_type is int:
        return int(raw)
    if target_type is float:
        return float(raw)
    return raw


def load_config(path=None, env: dict | None = None) -> PipelineConfig:
    """Config file (TOML or JSON by extension) layered under VOXMOD_* env vars."""
    values: dict = {}
    if path is not None:
        path = Path(path)
        if path.suffix == ".json":
            values = json.loads(path.read_text(encoding="utf-8"))
        else:
            values = tomllib.loads(path.read_text(encoding="utf-8"))
    config = PipelineConfig(**values)
    env = os.environ if env is None else env
    overrides = {}
    for f in fields(PipelineConfig):
        raw = env.get(ENV_PREFIX + f.name.upper())
        if raw is None:
            continue
        base = f.type if isinstance(f.type, type) else None
        if base is None:
            # string annotations: infer from the default
            default = getattr(config, f.name)
            base = type(default) if default is not None else str
        overrides[f.name] = _coerce(raw, base)
    return replace(config, **overrides) if overrides else config
