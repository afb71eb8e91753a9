"""voxmod: moderation automation for voice-forum audio.

Subpackages: audio ingest, per-frame feature extraction, triage
classifiers, transcript NLP, the moderation workflow, analytics, and the
HTTP/CLI service layer.
"""

from ._kernels import BACKEND as KERNEL_BACKEND

__version__ = "0.1.0"

__all__ = ["KERNEL_BACKEND", "__version__"]
