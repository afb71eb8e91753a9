"""Synthetic audio corpora for training, fixtures, and acceptance runs.

Real forum recordings are not distributable, so the triage classifiers are
exercised on generated stand-ins: "blank" items are silence or low-level
noise at varied levels, "speech-like" items are amplitude-modulated
multi-harmonic tones (a crude voiced-speech surrogate) over a noise floor.
Gendered variants differ only in fundamental-frequency range.
"""

from __future__ import annotations

import numpy as np

from .audio import CANONICAL_RATE, AudioClip
from .classify.dataset import LabeledDataset
from .features import clip_features

BLANK_LABELS = ("blank", "accepted")
GENDER_LABELS = ("male", "female")

MALE_F0 = (90.0, 150.0)
FEMALE_F0 = (180.0, 260.0)


def blank_clip(
    clip_id: str,
    rng: np.random.Generator,
    duration_s: float = 2.0,
    sample_rate: int = CANONICAL_RATE,
) -> AudioClip:
    """Silence or low-level noise; noise amplitude spans a wide SNR range."""
    n = int(duration_s * sample_rate)
    if rng.random() < 0.15:
        samples = np.zeros(n)
    else:
        amp = rng.uniform(0.0005, 0.03)
        samples = np.clip(rng.normal(0.0, amp, n), -1.0, 1.0)
    return AudioClip(id=clip_id, samples=samples, sample_rate=sample_rate)


def speech_clip(
    clip_id: str,
    rng: np.random.Generator,
    duration_s: float = 2.0,
    sample_rate: int = CANONICAL_RATE,
    f0_range: tuple[float, float] = (100.0, 280.0),
) -> AudioClip:
    """Voiced-speech surrogate: harmonics of a fundamental, syllabic
    amplitude modulation, random pauses, and a noise floor."""
    n = int(duration_s * sample_rate)
    t = np.arange(n) / sample_rate
    f0 = rng.uniform(*f0_range)
    voiced = np.zeros(n)
    n_harmonics = rng.integers(4, 9)
    for k in range(1, n_harmonics + 1):
        voiced += (1.0 / k) * np.sin(2 * np.pi * k * f0 * t + rng.uniform(0, 2 * np.pi))
    syllable_rate = rng.uniform(2.0, 6.0)
    envelope = 0.55 + 0.45 * np.sin(2 * np.pi * syllable_rate * t + rng.uniform(0, 2 * np.pi))
    gate = np.ones(n)
    pos = 0
    while pos < n:
        burst = int(rng.uniform(0.15, 0.5) * sample_rate)
        pause = int(rng.uniform(0.05, 0.25) * sample_rate)
        pos += burst
        gate[pos : pos + pause] = 0.0
        pos += pause
    signal = voiced * envelope * gate
    noise = rng.normal(0.0, rng.uniform(0.002, 0.01), n)
    signal = signal + noise
    peak = np.abs(signal).max()
    if peak > 0:
        signal = signal * (rng.uniform(0.3, 0.8) / peak)
    return AudioClip(id=clip_id, samples=np.clip(signal, -1.0, 1.0), sample_rate=sample_rate)


def _durations(rng: np.random.Generator, count: int) -> np.ndarray:
    return rng.uniform(1.0, 3.5, count)


def blank_speech_corpus(
    n_blank: int, n_speech: int, seed: int
) -> list[tuple[AudioClip, str]]:
    rng = np.random.default_rng(seed)
    corpus: list[tuple[AudioClip, str]] = []
    for i, dur in enumerate(_durations(rng, n_blank)):
        corpus.append((blank_clip(f"blank-{i:04d}", rng, dur), "blank"))
    for i, dur in enumerate(_durations(rng, n_speech)):
        corpus.append((speech_clip(f"speech-{i:04d}", rng, dur), "accepted"))
    return corpus


def gender_corpus(n_male: int, n_female: int, seed: int) -> list[tuple[AudioClip, str]]:
    rng = np.random.default_rng(seed)
    corpus: list[tuple[AudioClip, str]] = []
    for i, dur in enumerate(_durations(rng, n_male)):
        corpus.append((speech_clip(f"male-{i:04d}", rng, dur, f0_range=MALE_F0), "male"))
    for i, dur in enumerate(_durations(rng, n_female)):
        corpus.append((speech_clip(f"female-{i:04d}", rng, dur, f0_range=FEMALE_F0), "female"))
    return corpus


def corpus_dataset(
    corpus: list[tuple[AudioClip, str]], label_set: tuple[str, str]
) -> LabeledDataset:
    """Extract quartile features for every clip and assemble the dataset."""
    X = np.vstack([clip_features(clip).values for clip, _ in corpus])
    return LabeledDataset(
        X=X,
        labels=tuple(label for _, label in corpus),
        clip_ids=tuple(clip.id for clip, _ in corpus),
        label_set=label_set,
    )
