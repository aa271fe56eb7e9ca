"""Shared fixtures and independent numerical oracles for the test suite.

The quadrature oracle below evaluates ln B_{1/2}(a, b) = ln of the
integral of e^(a-1) * (1-e)^(b-1) over (0, 1/2) without reusing any code
from the package, so it can serve as an independent reference for the
continued-fraction implementation.
"""
from __future__ import annotations

import math
import warnings

import numpy as np
import pytest
from scipy.integrate import IntegrationWarning, quad

import pttb


def oracle_log_beta_inc_half(a: float, b: float) -> float:
    """High-accuracy quadrature of ln of the truncated beta integral.

    Two regimes keep the integrand well behaved for QUADPACK:

    * ``a < 1``: the endpoint singularity at 0 is removed by the
      substitution u = e**a, which turns the integral into
      (1/a) * integral of (1 - u**(1/a))**(b-1) over (0, 2**(-a)).
    * ``a >= 1``: the integrand can form an extremely sharp interior
      peak, so it is rescaled by its maximum (in log space) and the
      peak location +- a few standard deviations is passed to the
      integrator as explicit breakpoints.
    """
    if a < 1.0:
        upper = 0.5**a

        def integrand(u: float) -> float:
            return (1.0 - u ** (1.0 / a)) ** (b - 1.0)

        with warnings.catch_warnings():
            warnings.simplefilter("ignore", IntegrationWarning)
            val, _ = quad(integrand, 0.0, upper, epsabs=0.0, epsrel=1e-13,
                          limit=500)
        return math.log(val) - math.log(a)

    def log_f(e: float) -> float:
        out = 0.0
        if a != 1.0:
            out += (a - 1.0) * math.log(e)
        if b != 1.0:
            out += (b - 1.0) * math.log1p(-e)
        return out

    if a + b > 2.0:
        mode = (a - 1.0) / (a + b - 2.0)
    else:
        mode = 0.25
    mode = min(max(mode, 1e-12), 0.5 - 1e-12)
    curv = (a - 1.0) / mode**2 + (b - 1.0) / (1.0 - mode) ** 2
    sigma = 1.0 / math.sqrt(curv) if curv > 0 else 0.25
    log_peak = log_f(mode)

    def scaled(e: float) -> float:
        return math.exp(log_f(e) - log_peak)

    pts = sorted({min(max(mode + k * sigma, 1e-15), 0.5 - 1e-15)
                  for k in (-8, -4, -2, -1, 0, 1, 2, 4, 8)})
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", IntegrationWarning)
        val, _ = quad(scaled, 0.0, 0.5, epsabs=0.0, epsrel=1e-13,
                      points=pts, limit=500)
    return log_peak + math.log(val)


def make_instance(seed: int, n_items: int = 18, n_cues: int = 4,
                  noise: float = 0.5) -> pttb.PairwiseComparisons:
    """Synthetic comparison data with genuine cue structure.

    The criterion is a noisy linear function of the cues with sharply
    decaying coefficient magnitudes, so the posterior over strategies is
    informative rather than flat.
    """
    rng = np.random.default_rng(seed)
    scales = 2.0 * 0.5 ** np.arange(n_cues)
    w = rng.normal(size=n_cues) * scales
    x = rng.normal(size=(n_items, n_cues))
    criterion = x @ w + noise * rng.normal(size=n_items)
    return pttb.build_comparisons(pttb.ItemTable(x, criterion))


def strategy_key(s: pttb.TtbStrategy) -> tuple:
    return (s.order, s.directions, s.thresholds)


def empirical_tv(sampled: pttb.StrategyPosterior,
                 exact: pttb.StrategyPosterior) -> float:
    """Total variation distance between sample frequencies and exact probs."""
    freq: dict[tuple, int] = {}
    for s in sampled.strategies:
        k = strategy_key(s)
        freq[k] = freq.get(k, 0) + 1
    n = len(sampled.strategies)
    tv = 0.0
    seen = set()
    for s, p in zip(exact.strategies, exact.probabilities):
        k = strategy_key(s)
        seen.add(k)
        tv += abs(p - freq.get(k, 0) / n)
    for k, c in freq.items():
        if k not in seen:
            tv += c / n
    return 0.5 * tv


@pytest.fixture(scope="session")
def small_instances() -> list[pttb.PairwiseComparisons]:
    return [make_instance(seed) for seed in range(5)]


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    """Echo one PASS/FAIL line per acceptance criterion after the run."""
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
