"""Replicated train/test benchmark harness, MCMC traces, and rank exports."""

from __future__ import annotations

import logging
import time
import zlib
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field, replace

import numpy as np

from . import backend
from .baselines import CueValidity, classic_ttb_fit, logreg_fit
from .datasets import load_item_table  # noqa: F401  (re-exported harness API)
from .inference import (SamplerConfig, StrategyPosterior, cue_rank_marginals,
                        default_threshold_grid, gibbs_sample)
from .likelihood import NoisePrior
from .model import ItemTable, PairwiseComparisons, build_comparisons
from .prediction import predictive_probs

logger = logging.getLogger(__name__)

METHODS = ("PTTB", "PTTB-CDT", "TTB", "LOGREG")


@dataclass(frozen=True)
class BenchmarkConfig:
    datasets: tuple[tuple[str, ItemTable], ...]
    fractions: tuple[float, ...] = (0.1, 0.3, 0.5, 0.7, 0.9)
    replications: int = 100
    methods: tuple[str, ...] = METHODS
    sampler: SamplerConfig = field(default_factory=SamplerConfig)
    base_seed: int = 0
    transitivity_weight: bool = True
    threshold_grid_k: int = 4
    jobs: int = 1

    def __post_init__(self):
        if any(not 0.0 < f < 1.0 for f in self.fractions):
            raise ValueError("fractions must lie in (0, 1)")
        if self.replications < 1:
            raise ValueError("need at least one replication")
        unknown = set(self.methods) - set(METHODS)
        if unknown:
            raise ValueError(f"unknown methods: {sorted(unknown)}")


@dataclass(frozen=True)
class AccuracyRow:
    dataset: str
    method: str
    fraction: float
    replication: int
    accuracy: float
    seconds: float


def _seed_for(base_seed: int, dataset: str, fraction: float, rep: int,
              salt: int = 0) -> np.random.SeedSequence:
    return np.random.SeedSequence(
        [base_seed, zlib.crc32(dataset.encode()), int(round(fraction * 1e6)),
         rep, salt])


def accuracy_from_probs(p_first: np.ndarray, y: np.ndarray) -> float:
    """Mean credit: 1 match, 0 miss, 0.5 for predictions of exactly 1/2."""
    p_first = np.asarray(p_first, dtype=float)
    credit = np.where(p_first == 0.5, 0.5,
                      ((p_first > 0.5) == (y == 1)).astype(float))
    return float(credit.mean())


def _strategy_probs(strategy, test: PairwiseComparisons) -> np.ndarray:
    out = backend.outcomes_many(test.delta, np.asarray([strategy.order]),
                                np.asarray([strategy.directions]),
                                np.asarray([strategy.thresholds]))[0]
    return np.where(out == 1, 1.0, np.where(out == -1, 0.0, 0.5))


def _run_method(method: str, train: PairwiseComparisons,
                test: PairwiseComparisons, config: BenchmarkConfig,
                seed: int) -> float:
    prior = NoisePrior()
    if method in ("PTTB", "PTTB-CDT"):
        grid = (default_threshold_grid(train, config.threshold_grid_k)
                if method == "PTTB-CDT" else None)
        sampler = replace(config.sampler, seed=seed)
        posterior = gibbs_sample(train, prior, sampler, thresholds=grid)
        probs = predictive_probs(posterior, prior, test.delta)
    elif method == "TTB":
        probs = _strategy_probs(classic_ttb_fit(train), test)
    elif method == "LOGREG":
        model = logreg_fit(train)
        z = test.delta @ model.weights
        probs = 0.5 * (1.0 + np.tanh(0.5 * z))
    else:
        raise ValueError(f"unknown method {method!r}")
    return accuracy_from_probs(probs, test.y)


def _run_replication(config: BenchmarkConfig, name: str, table: ItemTable,
                     fraction: float, rep: int) -> list[AccuracyRow]:
    ss = _seed_for(config.base_seed, name, fraction, rep)
    rng = np.random.default_rng(ss)
    n = table.n_items
    n_train = int(round(fraction * n))
    perm = rng.permutation(n)
    train_idx, test_idx = perm[:n_train], perm[n_train:]
    if len(train_idx) < 2 or len(test_idx) < 2:
        logger.warning("skipping %s f=%.3g rep=%d: a split side has fewer "
                       "than 2 items", name, fraction, rep)
        return []
    try:
        train_w = build_comparisons(table.subset(train_idx),
                                    apply_weight=config.transitivity_weight)
        train_u = build_comparisons(table.subset(train_idx))
        test = build_comparisons(table.subset(test_idx))
    except ValueError as exc:
        logger.warning("skipping %s f=%.3g rep=%d: %s", name, fraction, rep, exc)
        return []
    rows = []
    for k, method in enumerate(config.methods):
        train = train_w if method in ("PTTB", "PTTB-CDT") else train_u
        seed = int(_seed_for(config.base_seed, name, fraction, rep,
                             salt=k + 1).generate_state(1)[0])
        t0 = time.perf_counter()
        acc = _run_method(method, train, test, config, seed)
        rows.append(AccuracyRow(name, method, fraction, rep, acc,
                                time.perf_counter() - t0))
    return rows


def run_benchmark(config: BenchmarkConfig) -> list[AccuracyRow]:
    """Evaluate every (dataset, fraction, replication, method) cell.

    Items (not pairs) are split, so no item appears on both sides. Results
    are deterministic functions of the config and ordered by
    (dataset, method, fraction, replication) regardless of execution order.
    """
    tasks = [(name, table, f, r)
             for name, table in config.datasets
             for f in config.fractions
             for r in range(config.replications)]
    rows: list[AccuracyRow] = []
    if config.jobs > 1:
        with ProcessPoolExecutor(max_workers=config.jobs) as pool:
            futures = [pool.submit(_run_replication, config, name, table, f, r)
                       for name, table, f, r in tasks]
            for fut in futures:
                rows.extend(fut.result())
    else:
        for name, table, f, r in tasks:
            rows.extend(_run_replication(config, name, table, f, r))
    order = {m: k for k, m in enumerate(config.methods)}
    rows.sort(key=lambda r: (r.dataset, order[r.method], r.fraction,
                             r.replication))
    return rows


def trace_log_posterior(data: PairwiseComparisons,
                        prior: NoisePrior = NoisePrior(),
                        iterations: int = 50, seed: int = 0) -> np.ndarray:
    """Unnormalized log posterior after each sweep; index 0 is the random
    initial configuration."""
    if iterations < 1:
        raise ValueError("need at least one iteration")
    posterior = gibbs_sample(data, prior,
                             SamplerConfig(samples=iterations, burn_in=0,
                                           seed=seed))
    return posterior.log_post_trace


def minmax_scale(values: np.ndarray) -> np.ndarray:
    """Affine rescale of a trace so its minimum is 0 and maximum is 1."""
    values = np.asarray(values, dtype=float)
    lo, hi = values.min(), values.max()
    if hi == lo:
        return np.zeros_like(values)
    return (values - lo) / (hi - lo)


def write_results_csv(rows: list[AccuracyRow], path) -> None:
    import csv
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["dataset", "method", "fraction", "replication",
                         "accuracy", "seconds"])
        for r in rows:
            writer.writerow([r.dataset, r.method, repr(r.fraction),
                             r.replication, repr(r.accuracy),
                             repr(r.seconds)])


def write_trace_csv(trace: np.ndarray, path) -> None:
    import csv
    scaled = minmax_scale(trace)
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["iteration", "log_post", "scaled"])
        for i, (lp, sc) in enumerate(zip(trace, scaled)):
            writer.writerow([i, repr(float(lp)), repr(float(sc))])


def export_cue_rank_heatmap(posterior: StrategyPosterior,
                            validities: list[CueValidity], csv_path,
                            svg_path=None,
                            cue_names: tuple[str, ...] | None = None) -> None:
    """Write the rank-marginal matrix with per-cue validities; optional SVG."""
    import csv
    marginals = cue_rank_marginals(posterior)
    m = marginals.shape[0]
    names = cue_names or tuple(f"cue{k + 1}" for k in range(m))
    v_by_cue = {v.cue: v.validity for v in validities}
    with open(csv_path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["cue", "rank", "probability", "validity"])
        for cue in range(m):
            for rank in range(m):
                writer.writerow([names[cue], rank + 1,
                                 repr(float(marginals[cue, rank])),
                                 repr(float(v_by_cue[cue]))])
    if svg_path is not None:
        _plot_rank_heatmap(marginals, v_by_cue, names, svg_path)


def _plot_rank_heatmap(marginals, v_by_cue, names, svg_path):
    import matplotlib
    matplotlib.use("svg")
    import matplotlib.pyplot as plt
    m = marginals.shape[0]
    fig, ax = plt.subplots(figsize=(1.2 * m + 2, 0.6 * m + 2))
    im = ax.imshow(marginals, cmap="viridis", vmin=0.0, aspect="auto")
    ax.set_xlabel("search position")
    ax.set_ylabel("cue")
    ax.set_xticks(range(m), [str(r + 1) for r in range(m)])
    ax.set_yticks(range(m), list(names))
    fig.colorbar(im, ax=ax, label="posterior probability")
    ax2 = ax.twiny()
    ax2.set_xlim(0.5, 1.0)
    ax2.plot([v_by_cue[c] for c in range(m)], range(m), "r-o", linewidth=1.5)
    ax2.set_xlabel("cue validity")
    fig.tight_layout()
    fig.savefig(svg_path)
    plt.close(fig)
