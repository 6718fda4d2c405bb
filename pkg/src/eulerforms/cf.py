"""Continued fractions with certified partial quotients, and the
irrationality-exponent / irrationality-base diagnostics built on them.

cf_expand works on an interval, not a point: the input's certified bounds
are converted to exact rationals (an mpfr is a dyadic rational, so this
loses nothing) and both endpoints are expanded in exact arithmetic. A
partial quotient is emitted only while the two expansions agree, so every
emitted quotient is provably correct for every number in the interval.
When they first disagree the remaining quotients are genuinely unknowable
at this precision and AmbiguousQuotient says so.

Each ConvergentRecord carries an enclosure [err_lo, err_hi] of the true
approximation error |alpha - p_k/q_k|, from the standard sandwich

    1/(q_k (q_{k+1} + q_k))  <  |alpha - p_k/q_k|  <  1/(q_k q_{k+1}),

and the per-record diagnostics are read off the enclosure edges:

    mu_k   = -log(err_lo) / log(q_k)    the exponent the enclosure cannot
                                        rule out (err_hi gives mu_tight,
                                        the exponent actually witnessed);
    beta_k = err_lo^(-1/q_k)            same convention for the base.

These are diagnostics over a finite window, not proofs about the limit;
the running-max and tail summaries exist to eyeball convergence.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence, Union

from .errors import AmbiguousQuotient
from .precreal import ErrReal


def _exact_bounds(alpha: Union[ErrReal, Fraction, int]) -> tuple[Fraction, Fraction]:
    if isinstance(alpha, ErrReal):
        num, den = alpha.value.as_integer_ratio()
        v = Fraction(int(num), int(den))
        e = Fraction(alpha.abs_err)
        return v - e, v + e
    f = Fraction(alpha)
    return f, f


def cf_expand(alpha: Union[ErrReal, Fraction, int], depth: int) -> list[int]:
    """Up to `depth` certified partial quotients of alpha.

    Exact rational inputs terminate naturally (13/4 -> [3, 4]). Interval
    inputs raise AmbiguousQuotient at the first quotient the interval is
    too wide to pin down; callers escalate precision and retry.
    """
    if depth < 1:
        raise ValueError("depth must be >= 1")
    lo, hi = _exact_bounds(alpha)
    quotients: list[int] = []
    exact = lo == hi
    for k in range(depth):
        a_lo = lo.numerator // lo.denominator
        a_hi = hi.numerator // hi.denominator
        if a_lo != a_hi:
            raise AmbiguousQuotient(
                f"quotient {k} not certified: interval floors {a_lo} vs {a_hi} "
                f"(got {quotients} so far)"
            )
        a = a_lo
        if k > 0 and a < 1:
            raise AmbiguousQuotient(
                f"quotient {k} computed as {a} < 1: interval too wide or input "
                f"within error of a rational"
            )
        quotients.append(int(a))
        flo, fhi = lo - a, hi - a
        if exact:
            if flo == 0:
                break
            lo = hi = 1 / flo
            continue
        if flo <= 0:
            # the interval touches the rational p_k/q_k itself; deeper
            # quotients cannot be certified
            if k + 1 < depth:
                raise AmbiguousQuotient(
                    f"interval touches a rational after quotient {k}"
                )
            break
        lo, hi = 1 / fhi, 1 / flo
    return quotients


@dataclass(frozen=True)
class ConvergentRecord:
    """One convergent p_k/q_k with its error enclosure and diagnostics."""

    k: int
    a_k: int
    p_k: int
    q_k: int
    err: ErrReal          # enclosure midpoint +- halfwidth, may be very wide
    err_lo: Fraction      # certified lower edge of |alpha - p_k/q_k|
    err_hi: Fraction      # certified upper edge
    mu_k: float
    mu_tight: float
    beta_k: float
    beta_tight: float


def _log_of_fraction(x: Fraction) -> float:
    """log of a positive rational whose parts may exceed float range."""
    num, den = x.numerator, x.denominator
    return _log_of_positive_int(num) - _log_of_positive_int(den)


def _log_of_positive_int(n: int) -> float:
    if n <= 0:
        raise ValueError("need a positive integer")
    if n.bit_length() <= 900:
        return math.log(n)
    shift = n.bit_length() - 64
    return math.log(n >> shift) + shift * math.log(2)


def _diagnostics(q: int, err_lo: Fraction, err_hi: Fraction) -> tuple[float, float, float, float]:
    log_q = _log_of_positive_int(q)
    neg_log_lo = -_log_of_fraction(err_lo)
    neg_log_hi = -_log_of_fraction(err_hi)
    if log_q == 0.0:
        # q = 1: the exponent form 1/q^mu cannot see any error level, so
        # the exponent diagnostics degenerate; the base ones stay finite
        mu = mu_tight = math.inf
    else:
        mu = neg_log_lo / log_q
        mu_tight = neg_log_hi / log_q
    beta = _exp_of_ratio(neg_log_lo, q)
    beta_tight = _exp_of_ratio(neg_log_hi, q)
    return mu, mu_tight, beta, beta_tight


def _exp_of_ratio(num: float, q: int) -> float:
    """exp(num / q) for a float num and a possibly enormous positive int q."""
    if q.bit_length() <= 900:
        r = num / q
        return math.exp(r) if r < 700 else math.inf
    if num <= 0.0:
        return 1.0
    l = math.log(num) - _log_of_positive_int(q)
    return math.exp(math.exp(l)) if l > -700 else 1.0


def _enclosure_to_errreal(err_lo: Fraction, err_hi: Fraction) -> ErrReal:
    mid = (err_lo + err_hi) / 2
    half = (err_hi - err_lo) / 2
    rec = ErrReal.from_fraction(mid, 64)
    return rec.widen(float(half) * (1 + 1e-12) + 5e-324)


def cf_convergents(quotients: Sequence[int]) -> list[ConvergentRecord]:
    """ConvergentRecords from partial quotients, via the standard recurrence.

    Records are produced for every k whose successor quotient is known
    (the error sandwich needs q_{k+1}), so len(records) = len(quotients)-1.
    The determinant identity p_k q_{k-1} - p_{k-1} q_k = (-1)^(k+1) is
    asserted at every step; its failure would mean corrupted arithmetic.
    """
    if len(quotients) < 1:
        raise ValueError("need at least one quotient")
    if any(a < 1 for a in quotients[1:]):
        raise ValueError("partial quotients after the first must be >= 1")
    p_prev, q_prev = 1, 0
    p, q = quotients[0], 1
    ps = [p]
    qs = [q]
    for k, a in enumerate(quotients[1:], start=1):
        p, p_prev = a * p + p_prev, p
        q, q_prev = a * q + q_prev, q
        det = p * q_prev - p_prev * q
        if det not in (1, -1):
            raise AssertionError(f"determinant {det} at k={k}, recurrence corrupted")
        ps.append(p)
        qs.append(q)
    records = []
    for k in range(len(qs) - 1):
        err_hi = Fraction(1, qs[k] * qs[k + 1])
        err_lo = Fraction(1, qs[k] * (qs[k + 1] + qs[k]))
        mu, mu_t, beta, beta_t = _diagnostics(qs[k], err_lo, err_hi)
        records.append(ConvergentRecord(
            k=k, a_k=quotients[k], p_k=ps[k], q_k=qs[k],
            err=_enclosure_to_errreal(err_lo, err_hi),
            err_lo=err_lo, err_hi=err_hi,
            mu_k=mu, mu_tight=mu_t, beta_k=beta, beta_tight=beta_t,
        ))
    return records


@dataclass(frozen=True)
class EstimateSeries:
    """Per-record diagnostic values with running and tail summaries."""

    values: list            # (k, value) pairs
    tight_values: list
    running_max: list
    tail_max: float         # max over the last third (>= 2 records)
    tail_min: float


def _series(records, attr: str, tight_attr: str) -> EstimateSeries:
    if len(records) < 2:
        raise ValueError("need at least 2 records")
    vals = [(r.k, getattr(r, attr)) for r in records]
    tight = [(r.k, getattr(r, tight_attr)) for r in records]
    running = []
    best = -math.inf
    for _, v in vals:
        best = max(best, v)
        running.append(best)
    w = max(2, len(vals) // 3)
    tail = [v for _, v in vals[-w:]]
    return EstimateSeries(values=vals, tight_values=tight, running_max=running,
                          tail_max=max(tail), tail_min=min(tail))


def mu_estimate(records) -> EstimateSeries:
    """Irrationality-exponent diagnostics per record (lower-edge convention)."""
    return _series(records, "mu_k", "mu_tight")


def beta_estimate(records) -> EstimateSeries:
    """Irrationality-base diagnostics per record (lower-edge convention)."""
    return _series(records, "beta_k", "beta_tight")


def equivalent_exponent(beta: float, eps: float, q: int) -> float:
    """The exponent mu making 1/q^mu equal the base form 1/(beta+eps)^q.

    q * log(beta + eps) / log(q), for q >= 2.
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    if beta + eps <= 0:
        raise ValueError("beta + eps must be positive")
    return q * math.log(beta + eps) / math.log(q)
