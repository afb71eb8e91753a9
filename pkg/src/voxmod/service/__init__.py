"""Service layer: event-sourced store, pipeline orchestration, HTTP API."""

from pathlib import Path
from typing import Callable

from ..classify import load_model
from ..data import fixture_category_rules, fixture_gazetteer, fixture_tag_registry
from ..text.categorize import CategoryRuleSet
from ..text.gazetteer import load_gazetteer
from .config import PipelineConfig, load_config
from .pipeline import ModerationPipeline, SmokeTestFailed
from .providers import (
    HttpTranscriptionProvider,
    MockTranscriptionProvider,
    NullProvider,
    TranscriptionProvider,
)
from .store import EventLog, ServiceStore, utc_clock


def build_pipeline(
    config: PipelineConfig,
    provider: TranscriptionProvider | None = None,
    clock: Callable[[], str] = utc_clock,
) -> ModerationPipeline:
    """Wire a pipeline from config: store (replaying any existing event
    log), models, provider, gazetteer, and category rules."""
    store = ServiceStore.open(config.data_dir, clock=clock)
    for kind, path in (("blank", config.blank_model_path), ("gender", config.gender_model_path)):
        if store.slot(kind) is None and path:
            blob = Path(path).read_bytes()
            import hashlib

            store.install_model(kind, load_model(blob), hashlib.sha256(blob).hexdigest())
    if provider is None:
        if config.stt_provider == "mock":
            if config.stt_fixtures_dir:
                provider = MockTranscriptionProvider.from_dir(config.stt_fixtures_dir)
            else:
                provider = MockTranscriptionProvider()
        elif config.stt_provider == "http":
            provider = HttpTranscriptionProvider(endpoint=config.stt_endpoint)
        else:
            provider = NullProvider()
    if config.gazetteer_path:
        gazetteer = load_gazetteer(config.gazetteer_path, config.alias_path)
    else:
        gazetteer = fixture_gazetteer()
    if config.rules_path:
        rules = CategoryRuleSet.load(config.rules_path)
    else:
        rules = fixture_category_rules()
    return ModerationPipeline(
        config=config,
        store=store,
        provider=provider,
        gazetteer=gazetteer,
        rules=rules,
        tag_registry=fixture_tag_registry(allow_free_text=True),
        clock=clock,
    )


__all__ = [
    "EventLog",
    "HttpTranscriptionProvider",
    "MockTranscriptionProvider",
    "ModerationPipeline",
    "NullProvider",
    "PipelineConfig",
    "ServiceStore",
    "SmokeTestFailed",
    "TranscriptionProvider",
    "build_pipeline",
    "load_config",
    "utc_clock",
]
