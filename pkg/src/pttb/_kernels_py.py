"""Pure-numpy decision kernels.

Fallback used when the compiled extension is unavailable. Both backends
implement the same two functions over batches of lexicographic strategies:

- ``outcomes_many``: per-pair decision of each strategy (+1 first item wins,
  -1 second item wins, 0 undecided).
- ``count_many``: per-strategy tallies of correct / incorrect / undecided
  decisions against observed labels.

Inputs are the pair difference matrix ``delta`` of shape (P, M) and C
candidate strategies given as row-aligned arrays ``orders`` (permutations,
0-based), ``dirs`` (+1/-1), and ``thrs`` (nonnegative), each of shape (C, M).
"""

from __future__ import annotations

import numpy as np


def outcomes_many(delta: np.ndarray, orders: np.ndarray, dirs: np.ndarray,
                  thrs: np.ndarray) -> np.ndarray:
    delta = np.ascontiguousarray(delta, dtype=np.float64)
    n_cand = orders.shape[0]
    n_pairs = delta.shape[0]
    out = np.empty((n_cand, n_pairs), dtype=np.int8)
    for c in range(n_cand):
        order = orders[c]
        scanned = delta[:, order]                       # (P, M) in scan order
        discr = np.abs(scanned) > thrs[c, order]
        any_discr = discr.any(axis=1)
        first = np.argmax(discr, axis=1)                # 0 when none discriminate
        cue = order[first]
        sign = np.sign(delta[np.arange(n_pairs), cue]).astype(np.int8)
        decision = (sign * dirs[c, cue]).astype(np.int8)
        decision[~any_discr] = 0
        out[c] = decision
    return out


def count_many(delta: np.ndarray, y: np.ndarray, orders: np.ndarray,
               dirs: np.ndarray, thrs: np.ndarray) -> np.ndarray:
    outcomes = outcomes_many(delta, orders, dirs, thrs)
    y_sign = (2 * np.asarray(y, dtype=np.int8) - 1)
    counts = np.empty((orders.shape[0], 3), dtype=np.float64)
    counts[:, 0] = (outcomes == y_sign).sum(axis=1)
    counts[:, 1] = (outcomes == -y_sign).sum(axis=1)
    counts[:, 2] = (outcomes == 0).sum(axis=1)
    return counts
