"""Posterior predictive probabilities for new comparisons, and accuracy.

For a single strategy with training counts (Nc, Ni, Nu), the predictive
probability that the first item wins is 1/2 when the strategy is undecided,
and otherwise a ratio of truncated incomplete beta functions: the posterior
probability that the decision is not flipped by noise.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Sequence, Union

import numpy as np

from . import backend
from .likelihood import NoisePrior
from .model import PairwiseComparisons, PredictionOutcome
from .inference import StrategyPosterior
from .special import log_beta_inc_half

Predictor = Callable[[Sequence[float], Sequence[float]],
                     Union[float, "PredictiveResult", PredictionOutcome]]


@dataclass(frozen=True)
class PredictiveResult:
    """Predictive probability that the first item has the higher criterion."""

    p_first: float

    def __post_init__(self):
        if not 0.0 <= self.p_first <= 1.0:
            raise ValueError("p_first must lie in [0, 1]")

    @property
    def p_second(self) -> float:
        return 1.0 - self.p_first

    @property
    def decided_label(self) -> int | str:
        if self.p_first > 0.5:
            return 1
        if self.p_first < 0.5:
            return 0
        return "coin"


def _entry_win_probs(posterior: StrategyPosterior, prior: NoisePrior,
                     entry_idx: Sequence[int]) -> np.ndarray:
    """Per-entry probability that a decided prediction is not noise-flipped."""
    probs = np.empty(len(entry_idx))
    for k, i in enumerate(entry_idx):
        c = posterior.counts[i]
        a = c.n_incorrect + prior.alpha
        b = c.n_correct + prior.beta
        probs[k] = np.exp(log_beta_inc_half(a, b + 1.0) - log_beta_inc_half(a, b))
    return probs


def predictive_probs(posterior: StrategyPosterior, prior: NoisePrior,
                     delta: np.ndarray) -> np.ndarray:
    """Posterior predictive p(first wins) for each row of a difference matrix."""
    if posterior.n_entries == 0:
        raise ValueError("empty posterior")
    # Sampled posteriors repeat strategies heavily; collapse duplicates
    # (identical strategies carry identical counts for the same data).
    weights = posterior.entry_weights
    unique: dict[tuple, int] = {}
    agg_weight: list[float] = []
    rep_entry: list[int] = []
    for i, s in enumerate(posterior.strategies):
        key = (s.order, s.directions, s.thresholds)
        u = unique.get(key)
        if u is None:
            unique[key] = len(agg_weight)
            agg_weight.append(float(weights[i]))
            rep_entry.append(i)
        else:
            agg_weight[u] += weights[i]
    orders = np.asarray([key[0] for key in unique])
    dirs = np.asarray([key[1] for key in unique])
    thrs = np.asarray([key[2] for key in unique])
    outcomes = backend.outcomes_many(delta, orders, dirs, thrs)  # (U, P)
    keep = _entry_win_probs(posterior, prior, rep_entry)[:, None]
    contrib = np.where(outcomes == 1, keep,
                       np.where(outcomes == -1, 1.0 - keep, 0.5))
    w = np.asarray(agg_weight)
    # Average the centered contributions so that e.g. an all-undecided
    # pair yields exactly 1/2 despite rounding in the posterior weights.
    return 0.5 + (w @ (contrib - 0.5)) / w.sum()


def predictive_prob(posterior: StrategyPosterior, prior: NoisePrior,
                    x1: Sequence[float], x2: Sequence[float]) -> PredictiveResult:
    """Predictive distribution for one new pair of items."""
    x1 = np.asarray(x1, dtype=np.float64)
    x2 = np.asarray(x2, dtype=np.float64)
    if x1.shape != (posterior.n_cues,) or x2.shape != (posterior.n_cues,):
        raise ValueError("feature vectors must match the posterior's cue count")
    p = predictive_probs(posterior, prior, (x1 - x2)[None, :])[0]
    return PredictiveResult(float(p))


def posterior_predictor(posterior: StrategyPosterior,
                        prior: NoisePrior = NoisePrior()) -> Predictor:
    """Bind a posterior into a plain (x1, x2) -> PredictiveResult callable."""
    def predict(x1, x2):
        return predictive_prob(posterior, prior, x1, x2)
    return predict


def _as_p_first(value) -> float:
    if isinstance(value, PredictiveResult):
        return value.p_first
    if isinstance(value, PredictionOutcome):
        return {PredictionOutcome.FIRST_WINS: 1.0,
                PredictionOutcome.SECOND_WINS: 0.0,
                PredictionOutcome.UNDECIDED: 0.5}[value]
    return float(value)


def evaluate_accuracy(predictor: Predictor, test: PairwiseComparisons) -> float:
    """Mean per-pair credit: 1 for a match, 0 for a miss, 0.5 for abstaining.

    A prediction of exactly 1/2 (including an undecided outcome) scores 0.5,
    the expected credit of deciding by a fair coin.
    """
    if test.n_pairs == 0:
        raise ValueError("empty test set")
    feats = test.item_table.features
    total = 0.0
    for i, j, y in test.pairs:
        p = _as_p_first(predictor(feats[i], feats[j]))
        if p == 0.5:
            total += 0.5
        else:
            total += 1.0 if (p > 0.5) == (y == 1) else 0.0
    return total / test.n_pairs
