"""Core decision model: items, strategies, and the lexicographic predictor.

A strategy scans the cues in a fixed search order; the first cue whose
absolute difference between the two items exceeds that cue's threshold
decides the comparison, in the cue's preferred direction. If no cue
discriminates, the comparison is undecided.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from enum import Enum
from typing import Sequence

import numpy as np


class PredictionOutcome(Enum):
    FIRST_WINS = 1
    SECOND_WINS = -1
    UNDECIDED = 0

    @classmethod
    def from_sign(cls, s: int) -> "PredictionOutcome":
        return cls(int(s))


@dataclass(frozen=True)
class ItemTable:
    """Items-by-cues feature matrix with a real-valued criterion per item."""

    features: np.ndarray          # (N, M)
    criterion: np.ndarray         # (N,)
    cue_names: tuple[str, ...] = ()

    def __post_init__(self):
        features = np.asarray(self.features, dtype=np.float64)
        criterion = np.asarray(self.criterion, dtype=np.float64)
        if features.ndim != 2 or features.shape[1] < 1:
            raise ValueError("features must be a 2-D array with at least one cue")
        if criterion.shape != (features.shape[0],):
            raise ValueError("criterion must have one value per item")
        names = tuple(self.cue_names) if self.cue_names else tuple(
            f"cue{m + 1}" for m in range(features.shape[1]))
        if len(names) != features.shape[1]:
            raise ValueError("cue_names length must match the number of cues")
        features.setflags(write=False)
        criterion.setflags(write=False)
        object.__setattr__(self, "features", features)
        object.__setattr__(self, "criterion", criterion)
        object.__setattr__(self, "cue_names", names)

    @property
    def n_items(self) -> int:
        return self.features.shape[0]

    @property
    def n_cues(self) -> int:
        return self.features.shape[1]

    def subset(self, indices: Sequence[int]) -> "ItemTable":
        idx = np.asarray(indices, dtype=np.intp)
        return ItemTable(self.features[idx].copy(), self.criterion[idx].copy(),
                         self.cue_names)


@dataclass(frozen=True)
class TtbStrategy:
    """Cue search order (0-based permutation), directions, and thresholds."""

    order: tuple[int, ...]
    directions: tuple[int, ...]
    thresholds: tuple[float, ...] = ()

    def __post_init__(self):
        m = len(self.order)
        if sorted(self.order) != list(range(m)):
            raise ValueError(f"order must be a permutation of 0..{m - 1}")
        if len(self.directions) != m or any(d not in (-1, 1) for d in self.directions):
            raise ValueError("directions must be +1/-1, one per cue")
        thresholds = tuple(float(t) for t in self.thresholds) or (0.0,) * m
        if len(thresholds) != m or any(t < 0 for t in thresholds):
            raise ValueError("thresholds must be nonnegative, one per cue")
        object.__setattr__(self, "order", tuple(int(g) for g in self.order))
        object.__setattr__(self, "directions", tuple(int(d) for d in self.directions))
        object.__setattr__(self, "thresholds", thresholds)

    @property
    def n_cues(self) -> int:
        return len(self.order)


def ttb_predict(strategy: TtbStrategy, x1: Sequence[float],
                x2: Sequence[float]) -> PredictionOutcome:
    """Lexicographic prediction of which item has the higher criterion."""
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    if x1.shape != (strategy.n_cues,) or x2.shape != (strategy.n_cues,):
        raise ValueError("feature vectors must match the strategy's cue count")
    for m in strategy.order:
        d = x1[m] - x2[m]
        if abs(d) > strategy.thresholds[m]:
            sign = 1 if d > 0 else -1
            return PredictionOutcome.from_sign(sign * strategy.directions[m])
    return PredictionOutcome.UNDECIDED


def transitivity_weight(n_items: int) -> float:
    """Likelihood weight log2(N!) / C(N, 2) for all-pairs comparison sets.

    Each comparison carries one bit while a full ranking of N items carries
    log2(N!) bits, so all-pairs data is downweighted to the ranking's
    information content.
    """
    if n_items < 2:
        raise ValueError("transitivity weight requires at least 2 items")
    log2_fact = math.lgamma(n_items + 1) / math.log(2.0)
    return log2_fact / math.comb(n_items, 2)


@dataclass(frozen=True)
class PairwiseComparisons:
    """Labeled pairwise comparisons over an item table.

    ``pairs`` holds (i, j, y) with y = 1 iff item i has the higher criterion.
    ``weight`` is the exponent applied to every likelihood term.
    """

    item_table: ItemTable
    pairs: tuple[tuple[int, int, int], ...]
    weight: float = 1.0
    delta: np.ndarray = field(init=False, repr=False)
    y: np.ndarray = field(init=False, repr=False)

    def __post_init__(self):
        if self.weight <= 0:
            raise ValueError("weight must be positive")
        seen = set()
        for i, j, y in self.pairs:
            if i == j:
                raise ValueError(f"pair ({i}, {j}) compares an item to itself")
            if y not in (0, 1):
                raise ValueError("labels must be 0 or 1")
            key = (min(i, j), max(i, j))
            if key in seen:
                raise ValueError(f"duplicated unordered pair {key}")
            seen.add(key)
        feats = self.item_table.features
        if self.pairs:
            ii = np.array([p[0] for p in self.pairs], dtype=np.intp)
            jj = np.array([p[1] for p in self.pairs], dtype=np.intp)
            delta = feats[ii] - feats[jj]
            y = np.array([p[2] for p in self.pairs], dtype=np.int64)
        else:
            delta = np.empty((0, feats.shape[1]), dtype=np.float64)
            y = np.empty((0,), dtype=np.int64)
        delta.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "pairs", tuple(self.pairs))
        object.__setattr__(self, "delta", delta)
        object.__setattr__(self, "y", y)

    @property
    def n_pairs(self) -> int:
        return len(self.pairs)

    @property
    def n_cues(self) -> int:
        return self.item_table.n_cues


def build_comparisons(table: ItemTable,
                      pair_policy: str | Sequence[tuple[int, int]] = "all_pairs",
                      apply_weight: bool = False) -> PairwiseComparisons:
    """Derive labeled comparisons from criterion values.

    Pairs with tied criteria are excluded (their label is undefined). With
    ``apply_weight`` and the all-pairs policy, the transitivity weight of the
    item count is attached.
    """
    n = table.n_items
    if n < 2:
        raise ValueError("need at least 2 items to form comparisons")
    if isinstance(pair_policy, str):
        if pair_policy != "all_pairs":
            raise ValueError(f"unknown pair policy {pair_policy!r}")
        candidates = [(i, j) for i in range(n) for j in range(i + 1, n)]
        all_pairs = True
    else:
        candidates = [(int(i), int(j)) for i, j in pair_policy]
        all_pairs = False
    crit = table.criterion
    pairs = []
    for i, j in candidates:
        if crit[i] == crit[j]:
            continue
        pairs.append((i, j, 1 if crit[i] > crit[j] else 0))
    if not pairs:
        raise ValueError("all pairs tied: no usable comparisons")
    weight = transitivity_weight(n) if (apply_weight and all_pairs) else 1.0
    return PairwiseComparisons(table, tuple(pairs), weight)
