"""Selects the decision-kernel backend at import time.

The compiled Cython extension is preferred; the numpy implementation is the
fallback. Set ``PTTB_BACKEND=python`` or ``PTTB_BACKEND=c`` to force one
(forcing ``c`` raises if the extension is missing).
"""

from __future__ import annotations

import os

import numpy as np

from . import _kernels_py

_forced = os.environ.get("PTTB_BACKEND", "").lower()

if _forced == "python":
    _impl = _kernels_py
    BACKEND = "python"
else:
    try:
        from . import _kernels_c as _impl  # type: ignore[no-redef]
        BACKEND = "c"
    except ImportError:
        if _forced == "c":
            raise
        _impl = _kernels_py
        BACKEND = "python"


def _prep(delta, orders, dirs, thrs):
    return (
        np.ascontiguousarray(delta, dtype=np.float64),
        np.ascontiguousarray(orders, dtype=np.int64),
        np.ascontiguousarray(dirs, dtype=np.int64),
        np.ascontiguousarray(thrs, dtype=np.float64),
    )


def outcomes_many(delta, orders, dirs, thrs) -> np.ndarray:
    """Decisions of C strategies on P pairs: (C, P) int8 in {+1, -1, 0}."""
    return _impl.outcomes_many(*_prep(delta, orders, dirs, thrs))


def count_many(delta, y, orders, dirs, thrs) -> np.ndarray:
    """Per-strategy (correct, incorrect, undecided) tallies: (C, 3) float."""
    delta, orders, dirs, thrs = _prep(delta, orders, dirs, thrs)
    y = np.ascontiguousarray(y, dtype=np.int64)
    return _impl.count_many(delta, y, orders, dirs, thrs)
