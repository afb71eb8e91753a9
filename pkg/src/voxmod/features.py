"""Per-frame audio descriptors, quartile aggregation, and mel spectrograms.

Each 50 ms frame yields a 34-value descriptor (index map in FEATURE_NAMES);
a clip is summarized by the four quartiles of each descriptor series,
giving the 136-dim vector both classifiers consume.

Formulas (f_k = k * sr / L is the frequency of spectrum bin k, L the frame
length, X the magnitude spectrum |FFT|[0:L/2] / (L/2), eps = 1e-8):

  0  zcr                sum(|diff(sign(x))|) / 2 / (L - 1)
  1  energy             sum(x^2) / L
  2  energy_entropy     -sum(s * log2(s + eps)), s = energies of 10 equal
                        sub-blocks normalized by total frame energy
  3  spectral_centroid  sum(ind * Xn) / (sum(Xn) + eps) / (sr/2), with
                        ind_k = (k + 1) * sr / (2 * |X|) and Xn = X / max(X)
  4  spectral_spread    sqrt(sum((ind - centroid)^2 * Xn) / (sum(Xn) + eps)) / (sr/2)
  5  spectral_entropy   entropy of X^2 over 10 equal sub-bands (as 2)
  6  spectral_flux      sum((X/sum(X + eps) - Xprev/sum(Xprev + eps))^2); 0 for
                        the first frame
  7  spectral_rolloff   (first bin where cumsum(X^2) exceeds 90% of total) / |X|
  8..20  mfcc 1-13      pre-emphasis 0.97 -> Hamming window -> power spectrum
                        -> 26 triangular mel filters (0..sr/2) -> ln(e + eps)
                        -> DCT-II (ortho), first 13 coefficients
  21..32 chroma 1-12    bin power X^2 summed per pitch class
                        round(12 * log2(f_k / 27.5)) mod 12, normalized by
                        total power (DC bin excluded)
  33 chroma_deviation   population std of the 12 chroma values

All-zero frames return the zero vector (degenerate-input convention, keeps
NaNs out of the quartile stage).
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from scipy.fft import dct

from .audio import AudioClip, ClipTooShort, Frame, frame_signal

EPS = 1e-8
N_FEATURES = 34
N_QUARTILE_FEATURES = 4 * N_FEATURES
MEL_LOG_FLOOR = 1e-10  # silence -> log10(1e-10) = -10.0 everywhere

FEATURE_NAMES = (
    ["zcr", "energy", "energy_entropy", "spectral_centroid", "spectral_spread",
     "spectral_entropy", "spectral_flux", "spectral_rolloff"]
    + [f"mfcc_{i}" for i in range(1, 14)]
    + [f"chroma_{i}" for i in range(1, 13)]
    + ["chroma_deviation"]
)


@dataclass(frozen=True)
class FrameFeatures:
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (N_FEATURES,):
            raise ValueError(f"expected {N_FEATURES} values, got {v.shape}")
        if not np.all(np.isfinite(v)):
            raise ValueError("feature values must be finite")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class FeatureMatrix:
    values: np.ndarray  # (34, T)
    clip_id: str

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.ndim != 2 or v.shape[0] != N_FEATURES or v.shape[1] < 1:
            raise ValueError(f"expected (34, T>=1) matrix, got {v.shape}")
        object.__setattr__(self, "values", v)

    @property
    def n_frames(self) -> int:
        return self.values.shape[1]


@dataclass(frozen=True)
class FeatureVector136:
    values: np.ndarray

    def __post_init__(self):
        v = np.asarray(self.values, dtype=np.float64)
        if v.shape != (N_QUARTILE_FEATURES,):
            raise ValueError(f"expected {N_QUARTILE_FEATURES} values, got {v.shape}")
        q = v.reshape(N_FEATURES, 4)
        if np.any(np.diff(q, axis=1) < -1e-9):
            raise ValueError("quartiles must be non-decreasing per feature")
        object.__setattr__(self, "values", v)


@dataclass(frozen=True)
class MelSpectrogram:
    matrix: np.ndarray  # (n_mels, T) log-power
    n_mels: int
    fft_size: int
    hop: int

    def __post_init__(self):
        m = np.asarray(self.matrix, dtype=np.float64)
        if m.ndim != 2 or m.shape[0] != self.n_mels or m.shape[1] < 1:
            raise ValueError(f"expected ({self.n_mels}, T>=1) matrix, got {m.shape}")
        if not np.all(np.isfinite(m)):
            raise ValueError("mel spectrogram entries must be finite")
        object.__setattr__(self, "matrix", m)


def magnitude_spectrum(x: np.ndarray) -> np.ndarray:
    """First-half FFT magnitude normalized by bin count."""
    n = len(x)
    half = n // 2
    return np.abs(np.fft.rfft(x))[:half] / half


def _block_entropy(energies: np.ndarray, total: float) -> float:
    s = energies / (total + EPS)
    return float(-np.sum(s * np.log2(s + EPS)))


def _energy_entropy(x: np.ndarray, n_blocks: int = 10) -> float:
    total = float(np.sum(x**2))
    sub_len = len(x) // n_blocks
    if sub_len == 0:
        return 0.0
    trimmed = x[: sub_len * n_blocks]
    sub = trimmed.reshape(n_blocks, sub_len)
    return _block_entropy(np.sum(sub**2, axis=1), total)


def _spectral_centroid_spread(spectrum: np.ndarray, sample_rate: int) -> tuple[float, float]:
    peak = spectrum.max()
    if peak <= 0:
        return 0.0, 0.0
    ind = np.arange(1, len(spectrum) + 1) * (sample_rate / (2.0 * len(spectrum)))
    xn = spectrum / peak
    den = float(np.sum(xn)) + EPS
    centroid = float(np.sum(ind * xn)) / den
    spread = float(np.sqrt(np.sum(((ind - centroid) ** 2) * xn) / den))
    nyquist = sample_rate / 2.0
    return centroid / nyquist, spread / nyquist


def _spectral_entropy(spectrum: np.ndarray, n_blocks: int = 10) -> float:
    power = spectrum**2
    total = float(np.sum(power))
    sub_len = len(power) // n_blocks
    if sub_len == 0 or total <= 0:
        return 0.0
    sub = power[: sub_len * n_blocks].reshape(n_blocks, sub_len)
    return _block_entropy(np.sum(sub, axis=1), total)


def _spectral_flux(spectrum: np.ndarray, prev_spectrum: np.ndarray) -> float:
    cur = spectrum / np.sum(spectrum + EPS)
    prev = prev_spectrum / np.sum(prev_spectrum + EPS)
    return float(np.sum((cur - prev) ** 2))


def _spectral_rolloff(spectrum: np.ndarray, fraction: float = 0.90) -> float:
    power = spectrum**2
    threshold = fraction * float(np.sum(power))
    above = np.nonzero(np.cumsum(power) + EPS > threshold)[0]
    if len(above) == 0:
        return 0.0
    return float(above[0]) / len(spectrum)


@lru_cache(maxsize=16)
def mel_filterbank(n_filters: int, n_bins: int, sample_rate: int, fft_len: int) -> np.ndarray:
    """Triangular filters on the HTK mel scale covering 0..sample_rate/2.

    n_bins spectrum bins are assumed to sit at f_k = k * sample_rate / fft_len.
    The returned array is cached and read-only.
    """
    def hz_to_mel(f):
        return 2595.0 * np.log10(1.0 + np.asarray(f, dtype=np.float64) / 700.0)

    def mel_to_hz(m):
        return 700.0 * (10.0 ** (np.asarray(m, dtype=np.float64) / 2595.0) - 1.0)

    edges = mel_to_hz(np.linspace(0.0, hz_to_mel(sample_rate / 2.0), n_filters + 2))
    bin_freqs = np.arange(n_bins) * sample_rate / fft_len
    bank = np.zeros((n_filters, n_bins))
    for m in range(n_filters):
        lo, center, hi = edges[m], edges[m + 1], edges[m + 2]
        rising = (bin_freqs - lo) / (center - lo)
        falling = (hi - bin_freqs) / (hi - center)
        bank[m] = np.maximum(0.0, np.minimum(rising, falling))
    bank.setflags(write=False)
    return bank


def _mfcc(x: np.ndarray, sample_rate: int, n_filters: int = 26, n_coeffs: int = 13) -> np.ndarray:
    emphasized = np.concatenate(([x[0]], x[1:] - 0.97 * x[:-1]))
    windowed = emphasized * np.hamming(len(x))
    power = np.abs(np.fft.rfft(windowed)) ** 2
    bank = mel_filterbank(n_filters, len(power), sample_rate, len(x))
    energies = np.log(bank @ power + EPS)
    return dct(energies, type=2, norm="ortho")[:n_coeffs]


def _chroma(spectrum: np.ndarray, sample_rate: int, frame_len: int) -> tuple[np.ndarray, float]:
    power = spectrum**2
    total = float(np.sum(power[1:]))  # DC carries no pitch class
    if total <= 0:
        return np.zeros(12), 0.0
    freqs = np.arange(1, len(spectrum)) * sample_rate / frame_len
    classes = np.mod(np.round(12.0 * np.log2(freqs / 27.5)).astype(int), 12)
    chroma = np.bincount(classes, weights=power[1:], minlength=12) / total
    return chroma, float(np.std(chroma))


def short_term_features(frame, sample_rate: int, prev_spectrum: np.ndarray | None = None) -> FrameFeatures:
    """Compute the 34-value descriptor of one frame.

    prev_spectrum is the previous frame's magnitude_spectrum, used for the
    spectral flux; pass None for the first frame (flux is then 0).
    """
    x = np.asarray(frame.samples if isinstance(frame, Frame) else frame, dtype=np.float64)
    if len(x) == 0:
        raise ValueError("empty frame")
    if not np.any(x):
        return FrameFeatures(np.zeros(N_FEATURES))
    spectrum = magnitude_spectrum(x)
    values = np.empty(N_FEATURES)
    values[0] = np.sum(np.abs(np.diff(np.sign(x)))) / 2.0 / (len(x) - 1)
    values[1] = np.sum(x**2) / len(x)
    values[2] = _energy_entropy(x)
    values[3], values[4] = _spectral_centroid_spread(spectrum, sample_rate)
    values[5] = _spectral_entropy(spectrum)
    values[6] = 0.0 if prev_spectrum is None else _spectral_flux(spectrum, prev_spectrum)
    values[7] = _spectral_rolloff(spectrum)
    values[8:21] = _mfcc(x, sample_rate)
    values[21:33], values[33] = _chroma(spectrum, sample_rate, len(x))
    return FrameFeatures(values)


def extract_feature_matrix(clip: AudioClip, frame_ms: int = 50, step_ms: int = 25) -> FeatureMatrix:
    """34 x T matrix, column t the descriptor of frame t.

    Sequential per clip: spectral flux chains consecutive frame spectra.
    """
    frames = frame_signal(clip, frame_ms=frame_ms, step_ms=step_ms)
    columns = np.empty((N_FEATURES, len(frames)))
    prev_spectrum = None
    for t, frame in enumerate(frames):
        columns[:, t] = short_term_features(frame, clip.sample_rate, prev_spectrum).values
        prev_spectrum = magnitude_spectrum(frame.samples)
    return FeatureMatrix(values=columns, clip_id=clip.id)


def quartile_aggregate(matrix: FeatureMatrix) -> FeatureVector136:
    """Summarize each feature series by (Q1, Q2, Q3, max), feature-major.

    Q1..Q3 are the 25th/50th/75th percentiles with linear interpolation
    between closest ranks; the fourth quartile is the series maximum.
    """
    rows = matrix.values
    quartiles = np.percentile(rows, [25.0, 50.0, 75.0], axis=1, method="linear")
    out = np.empty(N_QUARTILE_FEATURES)
    out[0::4] = quartiles[0]
    out[1::4] = quartiles[1]
    out[2::4] = quartiles[2]
    out[3::4] = rows.max(axis=1)
    return FeatureVector136(out)


def clip_features(clip: AudioClip, frame_ms: int = 50, step_ms: int = 25) -> FeatureVector136:
    """Full chain: frame, describe, quartile-aggregate."""
    return quartile_aggregate(extract_feature_matrix(clip, frame_ms=frame_ms, step_ms=step_ms))


def mel_spectrogram(
    clip: AudioClip, n_mels: int = 64, fft_size: int = 512, hop: int = 200
) -> MelSpectrogram:
    """Log-power mel spectrogram (Hamming window, triangular filterbank)."""
    x = clip.samples
    if len(x) < fft_size:
        raise ClipTooShort(f"clip of {len(x)} samples is shorter than fft_size={fft_size}")
    n_frames = (len(x) - fft_size) // hop + 1
    window = np.hamming(fft_size)
    bank = mel_filterbank(n_mels, fft_size // 2 + 1, clip.sample_rate, fft_size)
    out = np.empty((n_mels, n_frames))
    for t in range(n_frames):
        seg = x[t * hop : t * hop + fft_size] * window
        power = np.abs(np.fft.rfft(seg)) ** 2
        out[:, t] = np.log10(bank @ power + MEL_LOG_FLOOR)
    return MelSpectrogram(matrix=out, n_mels=n_mels, fft_size=fft_size, hop=hop)
