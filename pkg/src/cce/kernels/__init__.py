"""Sequence-model compute kernels with backend selection at import time.

The compiled extension (``cce.kernels._native``, built from Cython) is
preferred; the pure-numpy reference implementation is the fallback.  Set
``CCE_KERNELS=python`` or ``CCE_KERNELS=native`` to force a backend
(``native`` raises if the extension is missing).  Both backends expose the
same five functions and agree to floating-point roundoff; see
``benchmarks/bench_kernels.py`` for the speed comparison.
"""

from __future__ import annotations

import os

from cce.kernels import _reference

_forced = os.environ.get("CCE_KERNELS", "")

if _forced == "python":
    _impl = _reference
    BACKEND = "python"
else:
    try:
        from cce.kernels import _native as _impl  # type: ignore[no-redef]

        BACKEND = "native"
    except ImportError:
        if _forced == "native":
            raise
        _impl = _reference
        BACKEND = "python"

lstm_forward = _impl.lstm_forward
lstm_backward = _impl.lstm_backward
crf_forward = _impl.crf_forward
crf_backward = _impl.crf_backward
viterbi = _impl.viterbi

__all__ = [
    "BACKEND",
    "crf_backward",
    "crf_forward",
    "lstm_backward",
    "lstm_forward",
    "viterbi",
]
