"""Transcription providers: the contract, the fixture-backed mock used in
development and tests, and the (disabled by default) HTTP adapter skeleton.

A provider either returns a full Transcript or raises a typed
ProviderError; it never hands back a partial structure. The pipeline treats
provider failures as warnings and keeps the item moving.
"""

from __future__ import annotations

import json
import os
import time
from abc import ABC, abstractmethod
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from ..audio import AudioClip, encode_wav
from ..moderation import audio_content_hash
from ..text.transcript import Transcript, Word
from .serialize import transcript_from_json


class ProviderError(Exception):
    """Base for typed transcription failures."""


class NotRecognized(ProviderError):
    """Provider produced nothing usable for this clip."""


class ProviderUnavailable(ProviderError):
    pass


class ProviderTimeout(ProviderError):
    pass


class BadFixture(ValueError):
    pass


@dataclass(frozen=True)
class ProviderCapabilities:
    languages: tuple[str, ...]
    word_confidences: bool


class TranscriptionProvider(ABC):
    capabilities: ProviderCapabilities

    @abstractmethod
    def transcribe(self, clip: AudioClip, language: str) -> Transcript:
        """Full transcript or a ProviderError; never a partial structure."""


def load_transcript_fixture(path) -> Transcript:
    """Fixture file: {"language": ..., "words": [{"text":..., "confidence":...}]}."""
    try:
        doc = json.loads(Path(path).read_text(encoding="utf-8"))
        transcript = transcript_from_json(doc)
    except (OSError, ValueError, KeyError, TypeError) as exc:
        raise BadFixture(f"unreadable transcript fixture {path}: {exc}") from exc
    if not transcript.words:
        raise BadFixture(f"fixture {path} has no words")
    return transcript


class MockTranscriptionProvider(TranscriptionProvider):
    """Returns canned transcripts keyed by audio content hash.

    Unmapped audio raises NotRecognized. Optional injected latency and
    failure rate support degradation tests.
    """

    capabilities = ProviderCapabilities(languages=("hi", "en"), word_confidences=True)

    def __init__(
        self,
        fixtures: dict[str, Transcript] | None = None,
        failure_rate: float = 0.0,
        latency_s: float = 0.0,
        seed: int = 0,
    ):
        self.fixtures = dict(fixtures or {})
        self.failure_rate = failure_rate
        self.latency_s = latency_s
        self._rng = np.random.default_rng(seed)

    @classmethod
    def from_dir(cls, fixtures_dir, **kwargs) -> "MockTranscriptionProvider":
        fixtures = {}
        for path in sorted(Path(fixtures_dir).glob("*.json")):
            fixtures[path.stem] = load_transcript_fixture(path)
        return cls(fixtures=fixtures, **kwargs)

    def add_clip(self, clip: AudioClip, transcript: Transcript) -> str:
        key = audio_content_hash(clip)
        self.fixtures[key] = transcript
        return key

    def transcribe(self, clip: AudioClip, language: str) -> Transcript:
        if self.latency_s:
            time.sleep(self.latency_s)
        if self.failure_rate and self._rng.random() < self.failure_rate:
            raise ProviderUnavailable("injected failure")
        key = audio_content_hash(clip)
        transcript = self.fixtures.get(key)
        if transcript is None:
            raise NotRecognized(f"no fixture for audio {key[:12]}")
        return transcript


class HttpTranscriptionProvider(TranscriptionProvider):
    """Adapter skeleton for a real ASR HTTP endpoint.

    Disabled unless an endpoint is configured and the auth token env var is
    set; billing and retry logic are deliberately out of scope.
    """

    capabilities = ProviderCapabilities(languages=("hi", "en"), word_confidences=True)
    TOKEN_ENV = "VOXMOD_STT_TOKEN"

    def __init__(self, endpoint: str | None = None, timeout_s: float = 30.0):
        self.endpoint = endpoint
        self.timeout_s = timeout_s

    def transcribe(self, clip: AudioClip, language: str) -> Transcript:
        token = os.environ.get(self.TOKEN_ENV)
        if not self.endpoint or not token:
            raise ProviderUnavailable(
                f"HTTP provider needs an endpoint and {self.TOKEN_ENV} set"
            )
        import httpx

        try:
            response = httpx.post(
                self.endpoint,
                content=encode_wav(clip),
                headers={
                    "Authorization": f"Bearer {token}",
                    "Content-Type": "audio/wav",
                    "Accept-Language": language,
                },
                timeout=self.timeout_s,
            )
        except httpx.TimeoutException as exc:
            raise ProviderTimeout(str(exc)) from exc
        except httpx.HTTPError as exc:
            raise ProviderUnavailable(str(exc)) from exc
        if response.status_code != 200:
            raise ProviderUnavailable(f"endpoint returned {response.status_code}")
        doc = response.json()
        words = tuple(Word(w["text"], w.get("confidence")) for w in doc.get("words", ()))
        if not words:
            raise NotRecognized("empty transcript from endpoint")
        return Transcript(words=words, language=language, source="http-asr")


class NullProvider(TranscriptionProvider):
    """For deployments running without STT."""

    capabilities = ProviderCapabilities(languages=(), word_confidences=False)

    def transcribe(self, clip: AudioClip, language: str) -> Transcript:
        raise ProviderUnavailable("transcription disabled")
