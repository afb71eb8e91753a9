"""WAV decoding, resampling, and fixed-window framing.

Everything downstream consumes AudioClip: mono float samples in [-1, 1]
at a known rate. The pipeline's canonical internal rate is 8 kHz
(telephony audio); entry points resample to it.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from math import gcd

import numpy as np
from scipy.signal import resample_poly

CANONICAL_RATE = 8000
DEFAULT_FRAME_MS = 50
DEFAULT_STEP_MS = 25


class MalformedWav(ValueError):
    """Bad RIFF/WAVE structure: wrong magic, missing chunks, truncated data."""


class UnsupportedEncoding(ValueError):
    """WAV is structurally valid but not 8/16-bit PCM mono/stereo."""


class ClipTooShort(ValueError):
    """Clip shorter than one analysis frame."""


@dataclass(frozen=True)
class AudioClip:
    id: str
    samples: np.ndarray
    sample_rate: int

    def __post_init__(self):
        samples = np.asarray(self.samples, dtype=np.float64)
        if samples.ndim != 1:
            raise ValueError("samples must be 1-D")
        if self.sample_rate <= 0:
            raise ValueError("sample_rate must be positive")
        if samples.size and (np.abs(samples).max() > 1.0 + 1e-9):
            raise ValueError("samples must lie in [-1.0, 1.0]")
        samples.setflags(write=False)
        object.__setattr__(self, "samples", samples)

    @property
    def duration_s(self) -> float:
        return len(self.samples) / self.sample_rate

    def __eq__(self, other):
        if not isinstance(other, AudioClip):
            return NotImplemented
        return (
            self.id == other.id
            and self.sample_rate == other.sample_rate
            and np.array_equal(self.samples, other.samples)
        )


@dataclass(frozen=True)
class Frame:
    samples: np.ndarray
    start_offset_s: float


def _iter_chunks(data: bytes):
    pos = 12
    while pos + 8 <= len(data):
        cid = data[pos : pos + 4]
        (size,) = struct.unpack_from("<I", data, pos + 4)
        yield cid, pos + 8, size
        pos += 8 + size + (size & 1)  # chunks are word-aligned


def decode_wav(data: bytes) -> AudioClip:
    """Decode 8/16-bit PCM RIFF/WAVE bytes into a mono AudioClip.

    Stereo is downmixed by averaging the channels; integer samples are
    scaled into [-1, 1] by the type's max magnitude (32768 for 16-bit,
    128 for offset-binary 8-bit).
    """
    if len(data) < 12 or data[:4] != b"RIFF" or data[8:12] != b"WAVE":
        raise MalformedWav("not a RIFF/WAVE file")
    fmt = None
    payload = None
    for cid, start, size in _iter_chunks(data):
        if cid == b"fmt " and fmt is None:
            if size < 16 or start + 16 > len(data):
                raise MalformedWav("truncated fmt chunk")
            fmt = struct.unpack_from("<HHIIHH", data, start)
        elif cid == b"data" and payload is None:
            if start + size > len(data):
                raise MalformedWav("data chunk declares more bytes than the file holds")
            payload = data[start : start + size]
    if fmt is None or payload is None:
        raise MalformedWav("missing fmt or data chunk")
    audio_format, channels, sample_rate, _, _, bits = fmt
    if audio_format != 1:
        raise UnsupportedEncoding(f"non-PCM format tag {audio_format}")
    if channels not in (1, 2):
        raise UnsupportedEncoding(f"{channels} channels (mono or stereo only)")
    if sample_rate <= 0:
        raise MalformedWav("invalid sample rate")
    if bits == 16:
        usable = len(payload) - (len(payload) % (2 * channels))
        raw = np.frombuffer(payload[:usable], dtype="<i2").astype(np.float64)
        samples = raw / 32768.0
    elif bits == 8:
        usable = len(payload) - (len(payload) % channels)
        raw = np.frombuffer(payload[:usable], dtype=np.uint8).astype(np.float64)
        samples = (raw - 128.0) / 128.0
    else:
        raise UnsupportedEncoding(f"{bits}-bit PCM not supported")
    if channels == 2:
        samples = samples.reshape(-1, 2).mean(axis=1)
    return AudioClip(id="", samples=samples, sample_rate=sample_rate)


def encode_wav(clip: AudioClip) -> bytes:
    """Encode a clip as 16-bit PCM mono WAV (fixture and blob storage)."""
    ints = np.clip(np.rint(clip.samples * 32768.0), -32768, 32767).astype("<i2")
    payload = ints.tobytes()
    header = struct.pack(
        "<4sI4s4sIHHIIHH4sI",
        b"RIFF",
        36 + len(payload),
        b"WAVE",
        b"fmt ",
        16,
        1,
        1,
        clip.sample_rate,
        clip.sample_rate * 2,
        2,
        16,
        b"data",
        len(payload),
    )
    return header + payload


def resample(clip: AudioClip, target_rate: int) -> AudioClip:
    """Polyphase low-pass resampling; identity when already at target_rate."""
    if target_rate <= 0:
        raise ValueError("target_rate must be positive")
    if clip.sample_rate == target_rate:
        return clip
    g = gcd(clip.sample_rate, target_rate)
    out = resample_poly(clip.samples, target_rate // g, clip.sample_rate // g)
    out = np.clip(out, -1.0, 1.0)  # sinc ringing can overshoot slightly
    return AudioClip(id=clip.id, samples=out, sample_rate=target_rate)


def frame_signal(
    clip: AudioClip, frame_ms: int = DEFAULT_FRAME_MS, step_ms: int = DEFAULT_STEP_MS
) -> list[Frame]:
    """Slice the clip into fixed windows, discarding the trailing partial one.

    Frame count is floor((N - L) / S) + 1 with L/S the frame/step lengths in
    samples. Raises ClipTooShort when the clip holds less than one frame.
    """
    if frame_ms <= 0 or step_ms <= 0:
        raise ValueError("frame_ms and step_ms must be positive")
    frame_len = (clip.sample_rate * frame_ms) // 1000
    step_len = (clip.sample_rate * step_ms) // 1000
    n = len(clip.samples)
    if n < frame_len or frame_len == 0:
        raise ClipTooShort(
            f"clip of {n} samples is shorter than one {frame_ms} ms frame ({frame_len} samples)"
        )
    count = (n - frame_len) // step_len + 1
    return [
        Frame(
            samples=clip.samples[i * step_len : i * step_len + frame_len],
            start_offset_s=i * step_len / clip.sample_rate,
        )
        for i in range(count)
    ]
