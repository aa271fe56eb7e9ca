"""Log-scale truncated incomplete beta function.

Everything here revolves around ``B_half(a, b) = integral over (0, 1/2) of
e^(a-1) (1-e)^(b-1) de`` for real positive a, b, evaluated in log space so
that large (possibly non-integer, weighted) counts never underflow.

The evaluation uses the modified-Lentz continued fraction for the
regularized incomplete beta, with the usual symmetry switch: the fraction is
run on whichever of B_half(a, b) / B_half(b, a) is the well-conditioned tail
and the other is recovered through B_half(a, b) + B_half(b, a) = B(a, b).
"""

from __future__ import annotations

import math
from functools import lru_cache

_LOG_HALF = math.log(0.5)
_CF_MAX_ITER = 2000
_CF_EPS = 1e-16
_CF_TINY = 1e-300


def _validate(a: float, b: float) -> None:
    if not (math.isfinite(a) and math.isfinite(b)):
        raise ValueError(f"beta parameters must be finite, got ({a}, {b})")
    if a <= 0 or b <= 0:
        raise ValueError(f"beta parameters must be positive, got ({a}, {b})")


def log_beta(a: float, b: float) -> float:
    """Log of the complete beta function."""
    return math.lgamma(a) + math.lgamma(b) - math.lgamma(a + b)


def _betacf_half(a: float, b: float) -> float:
    """Modified-Lentz continued fraction for the incomplete beta at x = 1/2.

    Valid (fast-converging) when 1/2 < (a + 1) / (a + b + 2), i.e. b < a.
    """
    x = 0.5
    qab = a + b
    qap = a + 1.0
    qam = a - 1.0
    c = 1.0
    d = 1.0 - qab * x / qap
    if abs(d) < _CF_TINY:
        d = _CF_TINY
    d = 1.0 / d
    h = d
    for m in range(1, _CF_MAX_ITER + 1):
        m2 = 2 * m
        aa = m * (b - m) * x / ((qam + m2) * (a + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        h *= d * c
        aa = -(a + m) * (qab + m) * x / ((a + m2) * (qap + m2))
        d = 1.0 + aa * d
        if abs(d) < _CF_TINY:
            d = _CF_TINY
        c = 1.0 + aa / c
        if abs(c) < _CF_TINY:
            c = _CF_TINY
        d = 1.0 / d
        delta = d * c
        h *= delta
        if abs(delta - 1.0) < _CF_EPS:
            return h
    raise RuntimeError(f"incomplete beta continued fraction did not converge "
                       f"for a={a}, b={b}")


def _log_binc_half_direct(a: float, b: float) -> float:
    # B_half(a, b) = (1/2)^(a+b) / a * CF(a, b); tail side, no cancellation.
    return (a + b) * _LOG_HALF - math.log(a) + math.log(_betacf_half(a, b))


@lru_cache(maxsize=1 << 16)
def _log_beta_inc_half(a: float, b: float) -> float:
    # Direct evaluation is well conditioned when x=1/2 is below the mode
    # region, the standard switch point (a + 1) / (a + b + 2).
    if 0.5 < (a + 1.0) / (a + b + 2.0):
        return _log_binc_half_direct(a, b)
    log_b_full = log_beta(a, b)
    log_tail = _log_binc_half_direct(b, a)
    # tail/B <= ~1/2 on this branch, so log1p loses nothing.
    return log_b_full + math.log1p(-math.exp(log_tail - log_b_full))


def log_beta_inc_half(a: float, b: float) -> float:
    """ln of the incomplete beta integral over (0, 1/2) with parameters a, b."""
    _validate(a, b)
    return _log_beta_inc_half(float(a), float(b))


def trunc_beta_mean(a: float, b: float) -> float:
    """Mean of a beta(a, b) distribution truncated to (0, 1/2)."""
    _validate(a, b)
    return math.exp(log_beta_inc_half(a + 1.0, b) - log_beta_inc_half(a, b))
