"""Remap kernel backend selection.

The compiled Cython extension is preferred when importable; the numpy
implementation is the fallback and the reference for correctness. Set
``SLSV_KERNELS=python`` or ``SLSV_KERNELS=compiled`` to force a backend
(``compiled`` raises if the extension is missing).
"""
from __future__ import annotations

import os

from . import _ref

_choice = os.environ.get("SLSV_KERNELS", "auto").lower()

if _choice not in ("auto", "python", "compiled"):
    raise ValueError(f"SLSV_KERNELS must be auto|python|compiled, got {_choice!r}")

_impl = _ref
if _choice in ("auto", "compiled"):
    try:
        from . import _core as _impl  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise
        _impl = _ref

BACKEND: str = _impl.BACKEND
shift_remap = _impl.shift_remap
cumulative_eval = _impl.cumulative_eval

__all__ = ["BACKEND", "shift_remap", "cumulative_eval"]
