"""Closed-form conditional bounds tied to the linear-form exponents.

Everything here is plain float arithmetic on closed formulas; the heavy
certified machinery lives elsewhere.  The two growth exponents are

    sigma: upper exponent of log q_n along the subsequence, against n
    tau:   lower exponent of the linear-form decay, against n

and the calculators convert assumed (sigma, tau) pairs, or a decay margin
delta, into irrationality-measure statements.

The piecewise formula mu_sigma_tau has its branch point where
tau = 2 sigma log(4/e); both branches meet there at log(8)/(log(4) - 1),
and hitting the boundary exactly raises BranchBoundary rather than silently
picking a side.
"""

from __future__ import annotations

import math

from .errors import BranchBoundary

LOG_2E = math.log(2 * math.e)          # log(2e) = 1 + log 2
LOG_4_OVER_E = math.log(4) - 1.0       # log(4/e)
PLATEAU = math.log(8) / (math.log(4) - 1.0)


def theorem_bounds(delta: float) -> float:
    """The measure bound 2 e^(1 + delta/2) for a decay margin delta.

    Valid for 0 <= delta < 2 log(4/e); the bound runs from 2e at delta = 0
    up to 8 in the limit at the right edge.
    """
    if not 0 <= delta < 2 * LOG_4_OVER_E:
        raise ValueError(
            f"delta must lie in [0, {2 * LOG_4_OVER_E:.12f})")
    return 2.0 * math.exp(1.0 + delta / 2.0)


def m_lambda_eps(lam: float, eps: float) -> float:
    """The decay base e^(-1-eps) * min(4, lam/2).

    lam is the assumed linear-form growth factor, eps > 0 the slack from the
    limit superior; eps = 0 is allowed as the limiting value.
    """
    if lam <= 0:
        raise ValueError("lam must be positive")
    if eps < 0:
        raise ValueError("eps must be nonnegative")
    return math.exp(-1.0 - eps) * min(4.0, lam / 2.0)


def mu_sigma_tau(sigma: float, tau: float) -> float:
    """Conditional irrationality measure from the exponent pair (sigma, tau).

    For tau < 2 sigma log(4/e) the bound is 1 + (2 sigma / tau) log(2e);
    past that the improvement saturates and the bound is the constant
    log(8)/(log(4) - 1) = 5.3830491743...  Exact float equality with the
    branch point raises BranchBoundary: the caller should perturb tau to
    whichever side it means.
    """
    if not (sigma >= tau > 0):
        raise ValueError("need sigma >= tau > 0")
    threshold = 2.0 * sigma * LOG_4_OVER_E
    if tau == threshold:
        raise BranchBoundary(
            f"tau = 2 sigma log(4/e) = {threshold!r} exactly; both branches "
            f"give {PLATEAU!r} here, perturb tau to pick a side")
    if tau < threshold:
        return 1.0 + (2.0 * sigma / tau) * LOG_2E
    return PLATEAU


def chudnovsky_hata_bound(sigma: float, tau: float) -> float:
    """The comparison bound 1 + sigma/tau for the same exponent pair."""
    if not (sigma >= tau > 0):
        raise ValueError("need sigma >= tau > 0")
    return 1.0 + sigma / tau
