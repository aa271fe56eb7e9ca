"""Posterior inference over strategies: exhaustive enumeration and Gibbs MCMC.

The flip rate is integrated out analytically, so both routes work directly on
the discrete space of (search order, directions, thresholds) configurations.
The Gibbs sweep visits cues in random order; for the visited cue it rescores
every combination of insertion position, direction, and (optionally)
threshold while everything else stays fixed, and samples the next state from
those candidates in proportion to their unnormalized posterior.
"""

from __future__ import annotations

import itertools
import math
from dataclasses import dataclass

import numpy as np

from . import backend
from .likelihood import FitCounts, NoisePrior, log_marginal_likelihood
from .model import PairwiseComparisons, TtbStrategy

DEFAULT_ENUMERATION_CAP = 10 ** 6


class EnumerationCapError(RuntimeError):
    """Raised when exhaustive enumeration would exceed the configured cap."""


@dataclass(frozen=True)
class ThresholdGrid:
    """Per-cue candidate discrimination thresholds with a uniform prior."""

    per_cue: tuple[tuple[float, ...], ...]

    def __post_init__(self):
        cleaned = []
        for grid in self.per_cue:
            vals = tuple(float(t) for t in grid)
            if not vals:
                raise ValueError("each cue needs at least one threshold candidate")
            if any(t < 0 for t in vals):
                raise ValueError("thresholds must be nonnegative")
            if list(vals) != sorted(vals):
                raise ValueError("threshold candidates must be sorted ascending")
            cleaned.append(vals)
        object.__setattr__(self, "per_cue", tuple(cleaned))

    @classmethod
    def zeros(cls, n_cues: int) -> "ThresholdGrid":
        return cls(((0.0,),) * n_cues)

    @property
    def n_cues(self) -> int:
        return len(self.per_cue)

    @property
    def n_combinations(self) -> int:
        return math.prod(len(g) for g in self.per_cue)


def default_threshold_grid(data: PairwiseComparisons, k: int = 4) -> ThresholdGrid:
    """Zero plus K-1 interior quantiles of each cue's |difference| spread.

    Quantiles use linear interpolation between order statistics. A cue whose
    absolute differences have no spread collapses to the single candidate 0.
    """
    if k < 1:
        raise ValueError("grid size must be at least 1")
    grids = []
    abs_delta = np.abs(data.delta)
    for m in range(data.n_cues):
        col = abs_delta[:, m]
        if col.size == 0 or col.max() == col.min():
            grids.append((0.0,))
            continue
        qs = [100.0 * j / k for j in range(1, k)]
        cand = {0.0}
        cand.update(float(v) for v in np.percentile(col, qs))
        grids.append(tuple(sorted(cand)))
    return ThresholdGrid(tuple(grids))


@dataclass(frozen=True)
class SamplerConfig:
    samples: int = 1000
    burn_in: int = 100
    seed: int = 0

    def __post_init__(self):
        if self.samples < 1:
            raise ValueError("need at least one sample")
        if self.burn_in < 0:
            raise ValueError("burn-in must be nonnegative")


@dataclass(frozen=True)
class StrategyPosterior:
    """Exact table over all configurations, or an ordered set of MCMC draws."""

    mode: str                                 # "exact" | "sampled"
    strategies: tuple[TtbStrategy, ...]
    counts: tuple[FitCounts, ...]
    log_unnorm: np.ndarray
    probabilities: np.ndarray | None = None   # exact mode only
    burn_in: int = 0
    log_post_trace: np.ndarray | None = None  # per-sweep trace, sampled mode

    @property
    def n_entries(self) -> int:
        return len(self.strategies)

    @property
    def n_cues(self) -> int:
        return self.strategies[0].n_cues

    @property
    def entry_weights(self) -> np.ndarray:
        """Posterior weight of each entry (normalized probs or 1/S)."""
        if self.mode == "exact":
            return self.probabilities
        return np.full(self.n_entries, 1.0 / self.n_entries)

    def map_strategy(self) -> TtbStrategy:
        return self.strategies[int(np.argmax(self.log_unnorm))]


def _log_ml_rows(raw_counts: np.ndarray, weight: float,
                 prior: NoisePrior) -> np.ndarray:
    out = np.empty(raw_counts.shape[0])
    for i, (nc, ni, nu) in enumerate(raw_counts):
        out[i] = log_marginal_likelihood(
            FitCounts(weight * nc, weight * ni, weight * nu), prior)
    return out


def exhaustive_posterior(data: PairwiseComparisons,
                         prior: NoisePrior = NoisePrior(),
                         thresholds: ThresholdGrid | None = None,
                         cap: int = DEFAULT_ENUMERATION_CAP) -> StrategyPosterior:
    """Score every configuration and normalize.

    Raises :class:`EnumerationCapError` when the configuration count exceeds
    ``cap``; use :func:`gibbs_sample` in that case.
    """
    m = data.n_cues
    grid = thresholds if thresholds is not None else ThresholdGrid.zeros(m)
    if grid.n_cues != m:
        raise ValueError("threshold grid cue count mismatch")
    total = math.factorial(m) * 2 ** m * grid.n_combinations
    if total > cap:
        raise EnumerationCapError(
            f"{total} configurations exceed the enumeration cap {cap}; "
            f"use MCMC sampling instead")
    strategies = [
        TtbStrategy(order, dirs, thr)
        for order in itertools.permutations(range(m))
        for dirs in itertools.product((-1, 1), repeat=m)
        for thr in itertools.product(*grid.per_cue)
    ]
    orders = np.array([s.order for s in strategies])
    dirs = np.array([s.directions for s in strategies])
    thrs = np.array([s.thresholds for s in strategies])
    raw = backend.count_many(data.delta, data.y, orders, dirs, thrs)
    log_post = _log_ml_rows(raw, data.weight, prior)
    probs = np.exp(log_post - log_post.max())
    probs /= probs.sum()
    counts = tuple(FitCounts(data.weight * nc, data.weight * ni, data.weight * nu)
                   for nc, ni, nu in raw)
    return StrategyPosterior("exact", tuple(strategies), counts,
                             log_post, probabilities=probs)


def _sample_categorical(rng: np.random.Generator, log_w: np.ndarray) -> int:
    p = np.exp(log_w - log_w.max())
    cum = np.cumsum(p)
    return int(np.searchsorted(cum, rng.random() * cum[-1], side="right"))


def cue_step_candidates(order: list[int], dirs: list[int], thrs: list[float],
                        cue: int, cue_grid: tuple[float, ...]
                        ) -> list[tuple[list[int], list[int], list[float]]]:
    """Candidate configurations of one Gibbs step for ``cue``.

    The cue takes every insertion position (other cues keep their relative
    order) combined with both directions and every grid threshold for that
    cue; everything else is held fixed. The current configuration is always
    among the candidates.
    """
    m = len(order)
    rest = [c for c in order if c != cue]
    candidates = []
    for pos in range(m):
        new_order = rest[:pos] + [cue] + rest[pos:]
        for d in (-1, 1):
            new_dirs = list(dirs)
            new_dirs[cue] = d
            for t in cue_grid:
                new_thrs = list(thrs)
                new_thrs[cue] = t
                candidates.append((new_order, new_dirs, new_thrs))
    return candidates


def gibbs_sample(data: PairwiseComparisons,
                 prior: NoisePrior = NoisePrior(),
                 config: SamplerConfig = SamplerConfig(),
                 thresholds: ThresholdGrid | None = None,
                 init: TtbStrategy | None = None) -> StrategyPosterior:
    """Collapsed Gibbs sampling over (order, directions[, thresholds]).

    One sweep visits each cue once in a fresh random order. The state after
    each post-burn-in sweep is recorded as one sample. ``init`` overrides the
    default uniformly random initialization.
    """
    m = data.n_cues
    if m < 1:
        raise ValueError("need at least one cue")
    grid = thresholds if thresholds is not None else ThresholdGrid.zeros(m)
    if grid.n_cues != m:
        raise ValueError("threshold grid cue count mismatch")
    rng = np.random.default_rng(config.seed)

    if init is not None:
        order = list(init.order)
        dirs = list(init.directions)
        thrs = list(init.thresholds)
    else:
        order = list(rng.permutation(m))
        dirs = list(rng.choice((-1, 1), size=m))
        thrs = [g[rng.integers(len(g))] for g in grid.per_cue]

    def score_current() -> tuple[FitCounts, float]:
        raw = backend.count_many(data.delta, data.y, np.asarray([order]),
                                 np.asarray([dirs]), np.asarray([thrs]))[0]
        c = FitCounts(data.weight * raw[0], data.weight * raw[1],
                      data.weight * raw[2])
        return c, log_marginal_likelihood(c, prior)

    cur_counts, cur_log_post = score_current()
    trace = [cur_log_post]
    strategies: list[TtbStrategy] = []
    sample_counts: list[FitCounts] = []
    sample_log_post: list[float] = []

    n_sweeps = config.burn_in + config.samples
    for sweep in range(n_sweeps):
        for cue in rng.permutation(m):
            cue = int(cue)
            candidates = cue_step_candidates(order, dirs, thrs, cue,
                                             grid.per_cue[cue])
            raw = backend.count_many(
                data.delta, data.y,
                np.asarray([c[0] for c in candidates]),
                np.asarray([c[1] for c in candidates]),
                np.asarray([c[2] for c in candidates]))
            log_w = _log_ml_rows(raw, data.weight, prior)
            idx = _sample_categorical(rng, log_w)
            order, dirs, thrs = (list(candidates[idx][0]),
                                 list(candidates[idx][1]),
                                 list(candidates[idx][2]))
            cur_counts = FitCounts(data.weight * raw[idx][0],
                                   data.weight * raw[idx][1],
                                   data.weight * raw[idx][2])
            cur_log_post = float(log_w[idx])
        trace.append(cur_log_post)
        if sweep >= config.burn_in:
            strategies.append(TtbStrategy(tuple(order), tuple(dirs), tuple(thrs)))
            sample_counts.append(cur_counts)
            sample_log_post.append(cur_log_post)

    return StrategyPosterior(
        "sampled", tuple(strategies), tuple(sample_counts),
        np.asarray(sample_log_post), burn_in=config.burn_in,
        log_post_trace=np.asarray(trace))


def cue_rank_marginals(posterior: StrategyPosterior) -> np.ndarray:
    """Matrix of P(cue m sits at search position r); rows sum to 1."""
    if posterior.n_entries == 0:
        raise ValueError("empty posterior")
    m = posterior.n_cues
    weights = posterior.entry_weights
    marg = np.zeros((m, m))
    for strategy, w in zip(posterior.strategies, weights):
        for rank, cue in enumerate(strategy.order):
            marg[cue, rank] += w
    return marg
