"""Kernel backend selection.

The compiled extension (``_ckern``, built from Cython) and the pure-Python
module (``pure``) export the same two functions: ``closure`` and
``canonical_key``.  The compiled one is picked when available; set
``STRATA_KERNELS=pure`` (or ``c``) to force a backend, e.g. for benchmarks.
"""
from __future__ import annotations

import os

_choice = os.environ.get("STRATA_KERNELS", "auto")

if _choice not in ("auto", "pure", "c"):
    raise RuntimeError(f"STRATA_KERNELS must be auto, pure or c, not {_choice!r}")

if _choice == "pure":
    from .pure import BACKEND, canonical_key, closure
else:
    try:
        from ._ckern import BACKEND, canonical_key, closure
    except ImportError:
        if _choice == "c":
            raise
        from .pure import BACKEND, canonical_key, closure

__all__ = ["closure", "canonical_key", "BACKEND"]
