"""String distances used by the gazetteer matcher.

Levenshtein (the default metric) runs on the compiled kernel when built.
Padded Hamming right-pads the shorter string and counts positionwise
mismatches; it exists as the faithful historical mode of the matcher and is
ill-suited to unequal lengths, which is why it is not the default.
"""

from __future__ import annotations

from .._kernels import bounded_levenshtein, levenshtein

METRICS = ("levenshtein", "padded-hamming")


def padded_hamming(a: str, b: str) -> int:
    if len(a) < len(b):
        a = a + "\x00" * (len(b) - len(a))
    elif len(b) < len(a):
        b = b + "\x00" * (len(a) - len(b))
    return sum(1 for ca, cb in zip(a, b) if ca != cb)


def string_distance(a: str, b: str, metric: str = "levenshtein") -> int:
    if metric == "levenshtein":
        return levenshtein(a, b)
    if metric == "padded-hamming":
        return padded_hamming(a, b)
    raise ValueError(f"unknown metric {metric!r} (expected one of {METRICS})")


def string_distance_within(a: str, b: str, limit: int, metric: str = "levenshtein") -> int | None:
    """Distance if <= limit else None; uses the banded early-exit path."""
    if metric == "levenshtein":
        d = bounded_levenshtein(a, b, limit)
        return d if d <= limit else None
    d = string_distance(a, b, metric)
    return d if d <= limit else None
