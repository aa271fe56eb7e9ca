"""Linear regression with pairwise feedback from a lexicographic agent.

A simulated agent knows the true linear function but reports pairwise
preferences only through a threshold-TTB strategy fitted to the function's
ordering of a covariate grid. The regression posterior over the weights can
include those preferences either through the probabilistic TTB likelihood
(matching the biased generator) or through a plain flip-noise likelihood
that assumes the preferences are unbiased.
"""

from __future__ import annotations

import csv
import itertools
import math
from dataclasses import dataclass, field
from pathlib import Path

import numpy as np
from scipy.special import logsumexp

from . import backend
from .likelihood import NoisePrior
from .model import TtbStrategy, transitivity_weight, ttb_predict
from .special import log_beta_inc_half

_LOG_HALF = math.log(0.5)


def uniform_covariate_grid(points_per_axis: int = 5,
                           low: float = -1.0, high: float = 1.0) -> np.ndarray:
    """Cartesian 2-D grid of covariate points."""
    axis = np.linspace(low, high, points_per_axis)
    g1, g2 = np.meshgrid(axis, axis, indexing="ij")
    return np.column_stack([g1.ravel(), g2.ravel()])


@dataclass(frozen=True)
class AgentConfig:
    """Covariate grid and discrimination threshold of the simulated agent."""

    grid_points: np.ndarray = field(default_factory=uniform_covariate_grid)
    threshold: float = 0.25
    subset_size: int = 10
    seed: int = 0

    def __post_init__(self):
        pts = np.asarray(self.grid_points, dtype=float)
        if pts.ndim != 2 or pts.shape[0] < 2:
            raise ValueError("grid must contain at least 2 covariate points")
        if self.threshold < 0:
            raise ValueError("threshold must be nonnegative")
        if not 2 <= self.subset_size <= pts.shape[0]:
            raise ValueError("subset size must be between 2 and the grid size")
        pts.setflags(write=False)
        object.__setattr__(self, "grid_points", pts)

    @property
    def n_cues(self) -> int:
        return self.grid_points.shape[1]


@dataclass(frozen=True)
class PreferenceObservations:
    """Pairwise preference labels on a subset of the covariate grid."""

    points: np.ndarray                       # (K, M) covariates
    pairs: tuple[tuple[int, int], ...]       # indices into `points`
    labels: np.ndarray                       # h in {0, 1} per pair
    weight: float = 1.0

    def __post_init__(self):
        pts = np.asarray(self.points, dtype=float)
        labels = np.asarray(self.labels, dtype=np.int64)
        if labels.shape != (len(self.pairs),):
            raise ValueError("one label per pair required")
        pts.setflags(write=False)
        labels.setflags(write=False)
        object.__setattr__(self, "points", pts)
        object.__setattr__(self, "labels", labels)
        object.__setattr__(self, "pairs", tuple(self.pairs))

    @property
    def delta(self) -> np.ndarray:
        ii = np.array([p[0] for p in self.pairs], dtype=np.intp)
        jj = np.array([p[1] for p in self.pairs], dtype=np.intp)
        return self.points[ii] - self.points[jj]


def _all_pair_delta(points: np.ndarray) -> np.ndarray:
    idx = list(itertools.combinations(range(points.shape[0]), 2))
    ii = np.array([i for i, _ in idx], dtype=np.intp)
    jj = np.array([j for _, j in idx], dtype=np.intp)
    return points[ii] - points[jj]


def _enumerate_configs(n_cues: int, threshold: float
                       ) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """All (order, directions) configurations at a fixed shared threshold."""
    configs = [(order, dirs)
               for order in itertools.permutations(range(n_cues))
               for dirs in itertools.product((-1, 1), repeat=n_cues)]
    orders = np.array([c[0] for c in configs])
    dirs = np.array([c[1] for c in configs])
    thrs = np.full((len(configs), n_cues), float(threshold))
    return orders, dirs, thrs


def _induced_training(delta: np.ndarray, w: np.ndarray
                      ) -> tuple[np.ndarray, np.ndarray]:
    """Drop tied pairs and label the rest by the sign of w'(xi - xj)."""
    score = delta @ w
    keep = score != 0
    return delta[keep], (score[keep] > 0).astype(np.int64)


def simulate_agent(true_w, agent: AgentConfig,
                   apply_weight: bool = True) -> PreferenceObservations:
    """Preferences of a TTB-bound agent on a seeded grid subset.

    The agent's strategy is the MAP configuration of the exhaustive posterior
    on all grid comparisons labeled by the true function (enumeration order
    breaks ties). Undecided predictions are resolved by a seeded fair coin.
    """
    true_w = np.asarray(true_w, dtype=float)
    if true_w.shape != (agent.n_cues,):
        raise ValueError("true weights must match the covariate dimension")
    grid_delta = _all_pair_delta(agent.grid_points)
    train_delta, train_y = _induced_training(grid_delta, true_w)
    w_train = (transitivity_weight(agent.grid_points.shape[0])
               if apply_weight else 1.0)
    orders, dirs, thrs = _enumerate_configs(agent.n_cues, agent.threshold)
    log_post, _ = _marginal_log_liks(train_delta, train_y, w_train,
                                     orders, dirs, thrs, NoisePrior())
    best = int(np.argmax(log_post))
    strategy = TtbStrategy(tuple(orders[best]), tuple(dirs[best]),
                           tuple(thrs[best]))

    rng = np.random.default_rng(agent.seed)
    subset = rng.choice(agent.grid_points.shape[0], size=agent.subset_size,
                        replace=False)
    points = agent.grid_points[subset]
    pairs = tuple(itertools.combinations(range(agent.subset_size), 2))
    labels = []
    for i, j in pairs:
        outcome = ttb_predict(strategy, points[i], points[j])
        if outcome.value == 0:
            labels.append(int(rng.integers(2)))
        else:
            labels.append(1 if outcome.value == 1 else 0)
    weight = transitivity_weight(agent.subset_size) if apply_weight else 1.0
    return PreferenceObservations(points, pairs, np.asarray(labels), weight)


def unbiased_observations(true_w, agent: AgentConfig,
                          apply_weight: bool = True) -> PreferenceObservations:
    """Noise-free true-function preferences on the same seeded subset."""
    true_w = np.asarray(true_w, dtype=float)
    rng = np.random.default_rng(agent.seed)
    subset = rng.choice(agent.grid_points.shape[0], size=agent.subset_size,
                        replace=False)
    points = agent.grid_points[subset]
    pairs = tuple(itertools.combinations(range(agent.subset_size), 2))
    score = (points[[i for i, _ in pairs]] - points[[j for _, j in pairs]]) @ true_w
    labels = np.where(score > 0, 1,
                      np.where(score < 0, 0, rng.integers(2, size=len(pairs))))
    weight = transitivity_weight(agent.subset_size) if apply_weight else 1.0
    return PreferenceObservations(points, pairs, labels, weight)


def _marginal_log_liks(train_delta, train_y, train_weight, orders, dirs, thrs,
                       prior: NoisePrior) -> tuple[np.ndarray, np.ndarray]:
    """Marginal log likelihood and raw counts of each configuration."""
    if train_delta.shape[0] == 0:
        raw = np.zeros((orders.shape[0], 3))
    else:
        raw = backend.count_many(train_delta, train_y, orders, dirs, thrs)
    out = np.empty(orders.shape[0])
    for i, (nc, ni, nu) in enumerate(raw):
        out[i] = (-prior.log_norm + train_weight * nu * _LOG_HALF
                  + log_beta_inc_half(train_weight * ni + prior.alpha,
                                      train_weight * nc + prior.beta))
    return out, raw


def ttb_evidence(w, agent: AgentConfig, obs: PreferenceObservations,
                 prior: NoisePrior = NoisePrior(),
                 apply_weight: bool = True) -> float:
    """Log p(observations | w) under the TTB-mediated feedback model.

    The candidate weights induce training comparisons on the agent's grid;
    the observations are scored against each (order, directions)
    configuration, averaged under that configuration's posterior.
    """
    w = np.asarray(w, dtype=float)
    orders, dirs, thrs = _enumerate_configs(agent.n_cues, agent.threshold)
    grid_delta = _all_pair_delta(agent.grid_points)
    w_train = (transitivity_weight(agent.grid_points.shape[0])
               if apply_weight else 1.0)
    return _ttb_evidence_arrays(w, grid_delta, w_train, obs.delta, obs.labels,
                                obs.weight, orders, dirs, thrs, prior)


def _ttb_evidence_arrays(w, grid_delta, w_train, obs_delta, obs_y, w_obs,
                         orders, dirs, thrs, prior) -> float:
    train_delta, train_y = _induced_training(grid_delta, w)
    log_lik, train_counts = _marginal_log_liks(train_delta, train_y, w_train,
                                               orders, dirs, thrs, prior)
    log_post = log_lik - logsumexp(log_lik)     # uniform config prior
    if obs_delta.shape[0] == 0:
        return 0.0
    obs_counts = backend.count_many(obs_delta, obs_y, orders, dirs, thrs)
    terms = np.empty(orders.shape[0])
    for k in range(orders.shape[0]):
        a = w_train * train_counts[k, 1] + prior.alpha
        b = w_train * train_counts[k, 0] + prior.beta
        n_i = w_obs * obs_counts[k, 1]
        n_c = w_obs * obs_counts[k, 0]
        n_u = w_obs * obs_counts[k, 2]
        terms[k] = (log_post[k] + n_u * _LOG_HALF
                    + log_beta_inc_half(a + n_i, b + n_c)
                    - log_beta_inc_half(a, b))
    return float(logsumexp(terms))


def unbiased_evidence(w, obs: PreferenceObservations) -> float:
    """Log p(observations | w) assuming plain flip-noise around sign(w'delta)."""
    w = np.asarray(w, dtype=float)
    if len(obs.pairs) == 0:
        return 0.0
    score = obs.delta @ w
    h = obs.labels
    tie = score == 0
    right = ((score > 0) & (h == 1)) | ((score < 0) & (h == 0))
    n_tie = obs.weight * float(tie.sum())
    n_right = obs.weight * float(right.sum())
    n_wrong = obs.weight * float((~tie & ~right).sum())
    return (math.log(2.0) + n_tie * _LOG_HALF
            + log_beta_inc_half(n_wrong + 1.0, n_right + 1.0))


@dataclass(frozen=True)
class RegressionTask:
    """Direct regression observations, variances, and the weight grid spec."""

    direct_x: np.ndarray          # (N, M)
    direct_y: np.ndarray          # (N,)
    sigma2: float = 1.0
    tau2: float = 1.0
    w1_range: tuple[float, float] = (-2.0, 2.0)
    w2_range: tuple[float, float] = (-2.0, 2.0)
    resolution: int = 47

    def __post_init__(self):
        x = np.asarray(self.direct_x, dtype=float)
        y = np.asarray(self.direct_y, dtype=float)
        if x.ndim != 2 or y.shape != (x.shape[0],):
            raise ValueError("direct data must be (N, M) features, (N,) targets")
        if self.sigma2 <= 0 or self.tau2 <= 0:
            raise ValueError("variances must be positive")
        if self.resolution < 2:
            raise ValueError("grid resolution must be at least 2 per axis")
        x.setflags(write=False)
        y.setflags(write=False)
        object.__setattr__(self, "direct_x", x)
        object.__setattr__(self, "direct_y", y)

    def grid_axes(self) -> tuple[np.ndarray, np.ndarray]:
        return (np.linspace(*self.w1_range, self.resolution),
                np.linspace(*self.w2_range, self.resolution))


@dataclass(frozen=True)
class GridDensity:
    """Posterior values of the regression weights over a rectangular grid.

    ``values[i, j]`` corresponds to the weight vector (w1[i], w2[j]).
    """

    w1: np.ndarray
    w2: np.ndarray
    values: np.ndarray
    scaling: str = "max1"

    def argmax(self) -> np.ndarray:
        i, j = np.unravel_index(int(np.argmax(self.values)), self.values.shape)
        return np.array([self.w1[i], self.w2[j]])

    def mass_within(self, center, radius: float) -> float:
        """Fraction of total grid mass within a Euclidean ball of `center`."""
        center = np.asarray(center, dtype=float)
        g1, g2 = np.meshgrid(self.w1, self.w2, indexing="ij")
        dist2 = (g1 - center[0]) ** 2 + (g2 - center[1]) ** 2
        total = self.values.sum()
        return float(self.values[dist2 <= radius ** 2].sum() / total)


def grid_posterior(task: RegressionTask,
                   obs: PreferenceObservations | None = None,
                   agent: AgentConfig | None = None,
                   model: str = "none",
                   prior: NoisePrior = NoisePrior(),
                   scaling: str = "max1",
                   apply_weight: bool = True) -> GridDensity:
    """Unnormalized posterior of the regression weights over the grid.

    ``model`` selects the pairwise-evidence factor: "none" (direct data
    only), "ttb" (biased-feedback likelihood; requires ``agent``), or
    "unbiased" (plain flip-noise likelihood).
    """
    if model not in ("none", "ttb", "unbiased"):
        raise ValueError(f"unknown model {model!r}")
    if model != "none" and obs is None:
        raise ValueError(f"model {model!r} requires observations")
    if model == "ttb" and agent is None:
        raise ValueError("the ttb model requires an agent configuration")
    w1s, w2s = task.grid_axes()
    g1, g2 = np.meshgrid(w1s, w2s, indexing="ij")
    wgrid = np.column_stack([g1.ravel(), g2.ravel()])      # (R*R, 2)

    log_prior = -0.5 * (wgrid ** 2).sum(axis=1) / task.tau2
    resid = task.direct_y[None, :] - wgrid @ task.direct_x.T
    log_lik = -0.5 * (resid ** 2).sum(axis=1) / task.sigma2
    log_v = log_prior + log_lik

    if model == "ttb":
        orders, dirs, thrs = _enumerate_configs(agent.n_cues, agent.threshold)
        grid_delta = _all_pair_delta(agent.grid_points)
        w_train = (transitivity_weight(agent.grid_points.shape[0])
                   if apply_weight else 1.0)
        obs_delta = obs.delta
        log_v += np.array([
            _ttb_evidence_arrays(w, grid_delta, w_train, obs_delta,
                                 obs.labels, obs.weight, orders, dirs, thrs,
                                 prior)
            for w in wgrid])
    elif model == "unbiased":
        log_v += np.array([unbiased_evidence(w, obs) for w in wgrid])

    if scaling == "max1":
        values = np.exp(log_v - log_v.max())
    elif scaling == "raw":
        values = np.exp(log_v)
    else:
        raise ValueError(f"unknown scaling {scaling!r}")
    return GridDensity(w1s, w2s, values.reshape(len(w1s), len(w2s)), scaling)


PANEL_NAMES = ("no_pairwise", "ttb_obs_ttb_model", "unbiased_obs_ttb_model",
               "ttb_obs_unbiased_model", "unbiased_obs_unbiased_model")


def run_embedding_experiment(seed: int = 0,
                             true_w=(1.0, 0.8),
                             n_direct: int = 2,
                             subset_size: int = 10,
                             threshold: float = 0.25,
                             resolution: int = 47,
                             apply_weight: bool = True,
                             out_dir: str | Path | None = None,
                             svg: bool = False) -> dict[str, GridDensity]:
    """All five posterior panels for one seed; optionally written to disk.

    Direct data is sampled from the true model: covariates uniform over
    the weight-grid box (so two points carry enough signal to anchor the
    scale of w), Gaussian observation noise. Both observation types share
    the same seeded grid subset.
    """
    true_w = np.asarray(true_w, dtype=float)
    rng = np.random.default_rng(seed)
    direct_x = rng.uniform(-2.0, 2.0, size=(n_direct, 2))
    direct_y = direct_x @ true_w + rng.normal(size=n_direct)
    task = RegressionTask(direct_x, direct_y, resolution=resolution)
    agent = AgentConfig(threshold=threshold, subset_size=subset_size, seed=seed)
    obs_ttb = simulate_agent(true_w, agent, apply_weight=apply_weight)
    obs_unb = unbiased_observations(true_w, agent, apply_weight=apply_weight)

    panels = {
        "no_pairwise": grid_posterior(task),
        "ttb_obs_ttb_model": grid_posterior(
            task, obs_ttb, agent, "ttb", apply_weight=apply_weight),
        "unbiased_obs_ttb_model": grid_posterior(
            task, obs_unb, agent, "ttb", apply_weight=apply_weight),
        "ttb_obs_unbiased_model": grid_posterior(
            task, obs_ttb, model="unbiased", apply_weight=apply_weight),
        "unbiased_obs_unbiased_model": grid_posterior(
            task, obs_unb, model="unbiased", apply_weight=apply_weight),
    }
    if out_dir is not None:
        out_dir = Path(out_dir)
        out_dir.mkdir(parents=True, exist_ok=True)
        for name, density in panels.items():
            write_panel_csv(density, out_dir / f"panel_{name}.csv")
            if svg:
                _plot_panel(density, true_w, name,
                            out_dir / f"panel_{name}.svg")
    return panels


def write_panel_csv(density: GridDensity, path: str | Path) -> None:
    with open(path, "w", newline="", encoding="utf-8") as fh:
        writer = csv.writer(fh)
        writer.writerow(["w1", "w2", "density"])
        for i, w1 in enumerate(density.w1):
            for j, w2 in enumerate(density.w2):
                writer.writerow([repr(float(w1)), repr(float(w2)),
                                 repr(float(density.values[i, j]))])


def _plot_panel(density: GridDensity, true_w, title, svg_path) -> None:
    import matplotlib
    matplotlib.use("svg")
    import matplotlib.pyplot as plt
    fig, ax = plt.subplots(figsize=(4, 4))
    extent = (density.w2[0], density.w2[-1], density.w1[0], density.w1[-1])
    ax.imshow(density.values, origin="lower", extent=extent, cmap="viridis")
    ax.plot(true_w[1], true_w[0], "ro", markerfacecolor="none", markersize=9)
    ax.set_xlabel("w2")
    ax.set_ylabel("w1")
    ax.set_title(title)
    fig.tight_layout()
    fig.savefig(svg_path)
    plt.close(fig)
