"""Reference methods: validity-ordered TTB and logistic regression on cue
differences."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Sequence

import numpy as np
from scipy.optimize import minimize

from .model import PairwiseComparisons, TtbStrategy

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class CueValidity:
    """Direction-folded validity of a single cue on a training set."""

    cue: int
    validity: float           # in [0.5, 1] after folding
    direction: int            # +1/-1, the fold that attains `validity`
    discriminating_count: int


def classic_cue_validities(train: PairwiseComparisons) -> list[CueValidity]:
    """Per-cue fraction of discriminating pairs decided correctly.

    A cue that never discriminates gets validity 0.5 and direction +1.
    """
    if train.n_pairs == 0:
        raise ValueError("empty training set")
    delta = train.delta
    y_sign = 2 * train.y - 1
    out = []
    for m in range(train.n_cues):
        discr = delta[:, m] != 0
        n = int(discr.sum())
        if n == 0:
            out.append(CueValidity(m, 0.5, 1, 0))
            continue
        raw = float((np.sign(delta[discr, m]) == y_sign[discr]).mean())
        direction = 1 if raw >= 0.5 else -1
        out.append(CueValidity(m, max(raw, 1.0 - raw), direction, n))
    return out


def classic_ttb_fit(train: PairwiseComparisons) -> TtbStrategy:
    """Order cues by descending folded validity (ties: ascending cue index)."""
    validities = classic_cue_validities(train)
    ranked = sorted(validities, key=lambda v: (-v.validity, v.cue))
    order = tuple(v.cue for v in ranked)
    directions = tuple(v.direction for v in
                       sorted(validities, key=lambda v: v.cue))
    return TtbStrategy(order, directions)


@dataclass(frozen=True)
class LogRegModel:
    """Intercept-free logistic regression on cue differences.

    No intercept so that p(i beats j) = 1 - p(j beats i) holds exactly.
    """

    weights: np.ndarray
    converged: bool = True
    loss_history: tuple[float, ...] = field(default=(), repr=False)

    def predict(self, x1: Sequence[float], x2: Sequence[float]) -> float:
        d = np.asarray(x1, dtype=float) - np.asarray(x2, dtype=float)
        return float(_sigmoid(self.weights @ d))


def _sigmoid(z):
    return 0.5 * (1.0 + np.tanh(0.5 * z))


def logreg_loss_grad(beta: np.ndarray, delta: np.ndarray, y: np.ndarray,
                     ridge: float) -> tuple[float, np.ndarray]:
    """Ridge-penalized Bernoulli negative log-likelihood and its gradient."""
    z = delta @ beta
    # log(1 + exp(-s*z)) with s = +-1, computed stably
    s = 2.0 * y - 1.0
    loss = np.logaddexp(0.0, -s * z).sum() + 0.5 * ridge * beta @ beta
    grad = delta.T @ (_sigmoid(z) - y) + ridge * beta
    return float(loss), grad


def logreg_fit(train: PairwiseComparisons, ridge: float = 1e-4,
               max_iter: int = 500) -> LogRegModel:
    """Fit by L-BFGS; on hitting the iteration cap the best iterate is kept."""
    if train.n_pairs == 0:
        raise ValueError("empty training set")
    delta = train.delta
    y = train.y.astype(float)
    beta0 = np.zeros(train.n_cues)
    history = [logreg_loss_grad(beta0, delta, y, ridge)[0]]

    def record(bk):
        history.append(logreg_loss_grad(bk, delta, y, ridge)[0])

    res = minimize(logreg_loss_grad, beta0, args=(delta, y, ridge),
                   jac=True, method="L-BFGS-B", callback=record,
                   options={"maxiter": max_iter})
    if not res.success:
        logger.warning("logistic regression did not converge (%s); "
                       "returning best iterate", res.message)
    return LogRegModel(res.x, converged=bool(res.success),
                       loss_history=tuple(history))


def logreg_predict(model: LogRegModel, x1: Sequence[float],
                   x2: Sequence[float]) -> float:
    return model.predict(x1, x2)
