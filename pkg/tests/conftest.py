import numpy as np
import pytest

from voxmod.audio import AudioClip


def tone(freq: float, duration_s: float = 1.0, sample_rate: int = 8000, amp: float = 0.5,
         clip_id: str = "tone") -> AudioClip:
    t = np.arange(int(duration_s * sample_rate)) / sample_rate
    return AudioClip(id=clip_id, samples=amp * np.sin(2 * np.pi * freq * t), sample_rate=sample_rate)


@pytest.fixture
def tone_1k() -> AudioClip:
    return tone(1000.0)


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(42)
