"""Hot-kernel dispatch: compiled extension when available, pure fallback otherwise.

Set VOXMOD_PURE=1 to force the pure backend (used by the benchmark and the
backend-parity tests).
"""

import os

from . import pure

if os.environ.get("VOXMOD_PURE"):
    _impl = pure
    BACKEND = "pure"
else:
    try:
        from . import _ckernels as _impl  # type: ignore[attr-defined]

        BACKEND = "compiled"
    except ImportError:
        _impl = pure
        BACKEND = "pure"

best_split_sorted = _impl.best_split_sorted
levenshtein = _impl.levenshtein
bounded_levenshtein = _impl.bounded_levenshtein

__all__ = ["BACKEND", "best_split_sorted", "levenshtein", "bounded_levenshtein", "pure"]
