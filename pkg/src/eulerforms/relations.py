"""The integer-linear-form layer tying the three pipelines together.

The identity under test everywhere in this module:

    d(2n) * I(n) = d(2n) * C(2n,n) * gamma + log S(n) - d(2n) * A(n)

with d(2n) * A(n) an integer. relation_check reconstructs that integer
numerically from the other three quantities (each certified independently:
the gamma provider, the grouped log S(n) evaluator, and the dual-method
integral). Landing within tolerance of an integer simultaneously validates
all three pipelines; missing raises IntegralityFailure and means a bug,
not bad luck.

On top of the identity sit the diagnostic views: criterion_gap (how far
d(2n) I(n) sits from the fractional part of log S(n)), asymptotic_monitor
(the normalized exponents whose limits the theory pins down),
subsequence_scan (hunting n where {log S(n)} approaches a fixed rational),
and linear_form_sequence (the explicit rational approximations p_k/q_k to
gamma built from the identity, with the residual computed two ways that
must agree exactly in exact arithmetic and hence within error bounds here).
"""
from __future__ import annotations

import math
import statistics
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Sequence

from .constants import gamma as gamma_const
from .errors import IdentityMismatch, IntegralityFailure, PrecisionExhausted
from .exact import binomial, lcm_upto
from .integral import integral_In
from .logseq import error_floor, log_sn_reduced, log_sn_value
from .precreal import (
    DEFAULT_PRECISION_CEILING,
    ErrReal,
    certified_floor,
    certified_frac,
    log_of_int,
    _up,
)

_LOG10_2 = math.log10(2)


def _log_sn_to(n: int, abs_target: float,
               precision_ceiling: int = DEFAULT_PRECISION_CEILING) -> ErrReal:
    """log S(n) with abs_err at or below abs_target."""
    if abs_target <= 0:
        raise ValueError("abs_target must be positive")
    if error_floor(n) > abs_target:
        raise PrecisionExhausted(
            f"log S({n}) cannot be certified to {abs_target:.3g}: the double "
            f"error word floors at {error_floor(n):.3g}"
        )
    bits = max(64, int(-math.log2(abs_target)) + 64)
    while bits <= precision_ceiling:
        v = log_sn_value(n, bits)
        if v.abs_err <= abs_target:
            return v
        bits *= 2
    raise PrecisionExhausted(
        f"log S({n}) still above {abs_target:.3g} at {precision_ceiling} bits"
    )


def _gamma_for(scale: int, abs_target_log10: float) -> ErrReal:
    """gamma sized so that scale * err stays below 10^(-abs_target_log10).

    Digit counts are bucketed to multiples of 32 so repeated nearby requests
    hit the provider's cache.
    """
    digits = int(scale.bit_length() * _LOG10_2) + math.ceil(abs_target_log10) + 12
    digits = ((digits // 32) + 1) * 32
    return gamma_const(digits)


@dataclass(frozen=True)
class RelationReport:
    """Everything relation_check measured for one n."""

    n: int
    d2n: int
    binom: int
    gamma_digits: int
    log_sn: ErrReal
    integral: ErrReal
    dA_candidate: ErrReal
    nearest_int: int
    residual: ErrReal
    tolerance: float


def relation_check(n: int, tolerance: float = 1e-20) -> RelationReport:
    """Certify that the reconstructed d(2n)*A(n) is within tolerance of an
    integer.

    Error budget: gamma scaled by d(2n)*C(2n,n) gets tolerance/4, log S(n)
    gets tolerance/4, the integral (scaled by d(2n)) gets tolerance/4, and
    the remaining quarter covers arithmetic rounding. Raises
    IntegralityFailure when the certified interval around the candidate
    does not fit within tolerance of the nearest integer.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if tolerance <= 0:
        raise ValueError("tolerance must be positive")
    d = lcm_upto(2 * n)
    C = binomial(2 * n, n)
    dC = d * C
    tol_log10 = -math.log10(tolerance)

    g = _gamma_for(dC, tol_log10 + math.log10(4))
    # precondition from the contract: d(2n)*C(2n,n)*err(gamma) <= tol/4
    if math.log2(g.abs_err or 5e-324) + math.log2(dC) > math.log2(tolerance) - 2:
        raise PrecisionExhausted(
            f"gamma at {g.precision_bits} bits too wide for n={n} at {tolerance:.3g}"
        )

    logS = _log_sn_to(n, tolerance / 4)
    target_I = min(2.5e-31, tolerance / (8 * d) if d.bit_length() < 900 else 2.5e-31)
    I = integral_In(n, target_I)

    bits = dC.bit_length() + max(0, int(tol_log10 * 3.33)) + 96
    term_gamma = g.mul_int(dC, bits=bits)
    term_I = I.mul_int(d, bits=bits)
    dA = term_gamma.add(logS, bits=bits).sub(term_I, bits=bits)

    num, den = dA.value.as_integer_ratio()
    nearest = (2 * num + den) // (2 * den)
    residual = dA.sub(ErrReal.from_int(nearest, max(64, int(nearest).bit_length() + 2)),
                      bits=bits)
    if abs(float(residual.value)) + residual.abs_err > tolerance:
        raise IntegralityFailure(
            f"n={n}: candidate d(2n)A(n) is {float(residual.value):.3g} "
            f"+- {residual.abs_err:.3g} from the nearest integer, "
            f"outside tolerance {tolerance:.3g}"
        )
    return RelationReport(
        n=n, d2n=d, binom=C, gamma_digits=g.precision_bits,
        log_sn=logS, integral=I, dA_candidate=dA, nearest_int=nearest,
        residual=residual, tolerance=tolerance,
    )


def criterion_gap(n: int) -> ErrReal:
    """d(2n)*I(n) - {log S(n)}, the quantity whose eventual vanishing is
    equivalent to rationality of gamma.

    Both terms lie in [0, 1) for all but tiny n, so the gap lands in
    (-1, 1); the value is reported as measured either way.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    d = lcm_upto(2 * n)
    I = integral_In(n)
    logS = _log_sn_to(n, 1e-25)
    frac = certified_frac(logS)
    bits = max(I.precision_bits, frac.precision_bits, d.bit_length() + 96)
    return I.mul_int(d, bits=bits).sub(frac, bits=bits)


@dataclass(frozen=True)
class MonitorRecord:
    """Normalized exponents at one n, each certified."""

    n: int
    log_dn_over_n: ErrReal
    log_binom_over_2n: ErrReal
    log_In_over_n: Optional[ErrReal]
    log_dIn_over_n: Optional[ErrReal]


def asymptotic_monitor(n: int, with_integral: bool = True) -> MonitorRecord:
    """(1/n) log d(n), (1/(2n)) log C(2n,n), (1/n) log I(n), and
    (1/n) log(d(2n) I(n)).

    The last two require the dual-method integral and can be switched off
    for wide sweeps of the first two (their limits, 1 and log 2, are the
    cheap part of the asymptotics).
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    n_err = ErrReal.from_int(n, 64)
    log_dn = log_of_int(lcm_upto(n), 1e-25).div(n_err)
    log_binom = log_of_int(binomial(2 * n, n), 1e-25).div(ErrReal.from_int(2 * n, 64))
    log_In = None
    log_dIn = None
    if with_integral:
        I = integral_In(n)
        log_In = I.log().div(n_err)
        d2 = lcm_upto(2 * n)
        log_dIn = I.mul_int(d2, bits=I.precision_bits + d2.bit_length() + 8).log().div(n_err)
    return MonitorRecord(
        n=n, log_dn_over_n=log_dn, log_binom_over_2n=log_binom,
        log_In_over_n=log_In, log_dIn_over_n=log_dIn,
    )


@dataclass(frozen=True)
class ScanCandidate:
    """One n whose fractional part came within threshold of the target."""

    n: int
    gap: float            # {log S(n)} - a/b, measured
    gap_abs_err: float
    dist: float           # distance of log S(n) - a/b to the nearest integer
    dist_abs_err: float


@dataclass(frozen=True)
class ScanReport:
    n_max: int
    a: int
    b: int
    threshold: float
    frac_candidates: list
    dist_candidates: list
    sigma_fit: Optional[float]       # slope of n_k against k
    tau_fit: Optional[float]         # decay rate of |gap| along the candidates
    dist_sigma_fit: Optional[float]
    dist_tau_fit: Optional[float]
    remark_flag: bool                # True when a fit reports sigma < tau


def subsequence_scan(n_max: int, a: int, b: int, threshold: float) -> ScanReport:
    """All n <= n_max where {log S(n)} lands within threshold of a/b.

    A candidate is admitted when its certified interval intersects the
    closed threshold band, so no true hit can be missed. The parallel list
    uses nearest-integer distance instead of the one-sided fractional gap.
    For each list with at least two members, least-squares fits estimate
    the index growth (sigma: slope of n_k over k) and the decay rate
    (tau: minus the slope of log|gap| over k); the report flags sigma < tau,
    which the supporting theory rules out for true exponential subsequences
    and therefore marks a fit artifact worth inspecting.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if b < 1:
        raise ValueError("b must be >= 1")
    target = Fraction(a, b)
    if not 0 <= target <= 1:
        raise ValueError("a/b must lie in [0, 1]")
    if threshold < 0:
        raise ValueError("threshold must be >= 0")

    frac_hits: list[ScanCandidate] = []
    dist_hits: list[ScanCandidate] = []
    for n in range(1, n_max + 1):
        try:
            rec = log_sn_reduced(n)
        except PrecisionExhausted:
            continue
        fr = rec.frac_logSn
        bits = fr.precision_bits
        diff = fr.sub(ErrReal.from_fraction(target, bits), bits=bits)
        v = float(diff.value)
        e = diff.abs_err
        w = abs(v)
        dist = min(w, 1.0 - w)
        dist_err = _up(e + 1e-17)
        cand = ScanCandidate(n=n, gap=v, gap_abs_err=e, dist=dist, dist_abs_err=dist_err)
        if w - e <= threshold:
            frac_hits.append(cand)
        if dist - dist_err <= threshold:
            dist_hits.append(cand)

    def fit(cands, field):
        if len(cands) < 2:
            return None, None
        ks = list(range(1, len(cands) + 1))
        ns = [c.n for c in cands]
        mags = [math.log(max(abs(getattr(c, field)), 5e-324)) for c in cands]
        return (statistics.linear_regression(ks, ns).slope,
                -statistics.linear_regression(ks, mags).slope)

    sigma, tau = fit(frac_hits, "gap")
    dsigma, dtau = fit(dist_hits, "dist")
    flag = any(s is not None and t is not None and s < t
               for s, t in ((sigma, tau), (dsigma, dtau)))
    return ScanReport(
        n_max=n_max, a=a, b=b, threshold=threshold,
        frac_candidates=frac_hits, dist_candidates=dist_hits,
        sigma_fit=sigma, tau_fit=tau,
        dist_sigma_fit=dsigma, dist_tau_fit=dtau,
        remark_flag=flag,
    )


@dataclass(frozen=True)
class LinearFormRecord:
    """One rational approximation to gamma built from the integer form.

    q = b * d(2n) * C(2n,n); the floor variant takes
    p = b * d(2n)A(n) - b * floor(log S(n)) - a, the ceiling variant
    replaces floor by ceiling and flips the sign of a. The residual
    (q*gamma - p)/b is computed directly and re-derived through the
    identity as d(2n)I(n) + a/b - {log S(n)}; both are carried here.
    """

    n: int
    q: int
    p_floor: int
    p_ceil: int
    residual: ErrReal            # (q*gamma - p_floor)/b, direct
    residual_identity: ErrReal   # d(2n)I(n) + a/b - {log S(n)}
    residual_ceil: ErrReal       # (q*gamma - p_ceil)/b, direct
    log_q: float


def linear_form_sequence(n_list: Sequence[int], a: int, b: int) -> list[LinearFormRecord]:
    """LinearFormRecords for each n in n_list.

    The direct and identity computations of the residual must agree within
    their summed certified errors; any gap beyond that raises
    IdentityMismatch, since the two are algebraically equal given that
    d(2n)A(n) is the integer relation_check certified.
    """
    if b < 1:
        raise ValueError("b must be >= 1")
    out: list[LinearFormRecord] = []
    for n in n_list:
        rep = relation_check(n, 1e-20)
        d, C, dA = rep.d2n, rep.binom, rep.nearest_int
        q = b * d * C
        floor_ls = certified_floor(rep.log_sn)
        frac_ls = certified_frac(rep.log_sn)
        p_floor = b * dA - b * floor_ls - a
        p_ceil = b * dA - b * (floor_ls + 1) + a

        g = _gamma_for(q, 22.0)
        bits = q.bit_length() + 160
        b_err = ErrReal.from_int(b, 64)
        direct = g.mul_int(q, bits=bits).sub(
            ErrReal.from_int(p_floor, max(64, int(p_floor).bit_length() + 2)), bits=bits
        ).div(b_err)
        direct_ceil = g.mul_int(q, bits=bits).sub(
            ErrReal.from_int(p_ceil, max(64, int(p_ceil).bit_length() + 2)), bits=bits
        ).div(b_err)
        ident = rep.integral.mul_int(d, bits=bits).add(
            ErrReal.from_fraction(Fraction(a, b), bits), bits=bits
        ).sub(frac_ls, bits=bits)

        gap = abs(float(direct.value) - float(ident.value))
        budget = _up(direct.abs_err + ident.abs_err)
        if gap > budget:
            raise IdentityMismatch(
                f"n={n}: direct residual {float(direct.value):.6g} vs identity "
                f"{float(ident.value):.6g} differ by {gap:.3g} > {budget:.3g}"
            )
        ident_ceil = ident.add(
            ErrReal.from_fraction(1 - 2 * Fraction(a, b), bits), bits=bits
        )
        gap_c = abs(float(direct_ceil.value) - float(ident_ceil.value))
        if gap_c > _up(direct_ceil.abs_err + ident_ceil.abs_err):
            raise IdentityMismatch(
                f"n={n}: ceiling-variant residuals differ by {gap_c:.3g}"
            )
        out.append(LinearFormRecord(
            n=n, q=q, p_floor=p_floor, p_ceil=p_ceil,
            residual=direct, residual_identity=ident, residual_ceil=direct_ceil,
            log_q=float(log_of_int(q, 1e-9).value),
        ))
    return out
