"""Marginal likelihood of a strategy with the flip noise integrated out.

A comparison whose observed label matches the strategy's decision contributes
(1 - e), a mismatch contributes e, and an undecided decision contributes 1/2.
Integrating the noise rate e over its truncated-beta prior on (0, 1/2) turns
the product of those terms into a single truncated incomplete beta ratio.
"""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from . import backend
from .model import PairwiseComparisons, TtbStrategy
from .special import log_beta_inc_half, trunc_beta_mean

_LOG_HALF = float(np.log(0.5))


@dataclass(frozen=True)
class NoisePrior:
    """Beta(alpha, beta) prior on the flip rate, truncated to (0, 1/2)."""

    alpha: float = 1.0
    beta: float = 1.0

    def __post_init__(self):
        if self.alpha <= 0 or self.beta <= 0:
            raise ValueError("prior shape parameters must be positive")

    @property
    def log_norm(self) -> float:
        """ln Z of the truncated prior (ln(1/2) for the uniform prior)."""
        return log_beta_inc_half(self.alpha, self.beta)


@dataclass(frozen=True)
class FitCounts:
    """(Possibly weighted) correct / incorrect / undecided decision counts."""

    n_correct: float
    n_incorrect: float
    n_undecided: float

    def __post_init__(self):
        if min(self.n_correct, self.n_incorrect, self.n_undecided) < 0:
            raise ValueError("counts must be nonnegative")


@dataclass(frozen=True)
class TruncatedBetaPosterior:
    """Beta(a, b) on (0, 1/2): the conditional posterior of the flip rate."""

    a: float
    b: float

    def __post_init__(self):
        if self.a <= 0 or self.b <= 0:
            raise ValueError("posterior parameters must be positive")

    @property
    def mean(self) -> float:
        return trunc_beta_mean(self.a, self.b)


def count_outcomes(strategy: TtbStrategy, data: PairwiseComparisons) -> FitCounts:
    """Classify every pair against its label and apply the likelihood weight."""
    if data.n_cues != strategy.n_cues:
        raise ValueError("data and strategy cue counts differ")
    counts = backend.count_many(
        data.delta, data.y,
        np.asarray([strategy.order]),
        np.asarray([strategy.directions]),
        np.asarray([strategy.thresholds]))[0]
    w = data.weight
    return FitCounts(w * counts[0], w * counts[1], w * counts[2])


def log_marginal_likelihood(counts: FitCounts, prior: NoisePrior = NoisePrior()) -> float:
    """ln p(labels | strategy) with the flip rate marginalized out."""
    return (-prior.log_norm
            + counts.n_undecided * _LOG_HALF
            + log_beta_inc_half(counts.n_incorrect + prior.alpha,
                                counts.n_correct + prior.beta))


def epsilon_posterior(counts: FitCounts, prior: NoisePrior = NoisePrior()
                      ) -> TruncatedBetaPosterior:
    """Conditional posterior of the flip rate given the decision counts."""
    return TruncatedBetaPosterior(counts.n_incorrect + prior.alpha,
                                  counts.n_correct + prior.beta)
