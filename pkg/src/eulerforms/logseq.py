"""The F(n) pipeline: certified fractional part, nearest-integer distance,
and F(n) = (1/n) log dist(log S(n)) for the big integer sequence S(n).

S(n) itself is never materialized (it has ~(2e)^(2n) digits); everything is
computed from log S(n) = sum_m G_m log(n+m) with the exact grouped exponents
of exact.grouped_exponents. The working precision must cover the INTEGER part
of log S(n) before a single fractional digit is trustworthy, hence the
magnitude-aware budgeting below: digits = ceil(2n log10(2e)) + 40 guard
digits + the requested output digits, doubled on any certified-boundary
ambiguity up to a ceiling.

Range note: certified error bounds ride in a double whose smallest positive
value is 5e-324; scaled by the exact exponents, the summed bound has a hard
floor (error_floor) that crosses the 15-digit stability target near n = 210.
The series is exercised to n = 200 in tests; beyond the floor the pipeline
raises PrecisionExhausted immediately rather than silently degrading.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Callable, Iterable, Optional, Union

import gmpy2

from .errors import AmbiguousBoundary, PrecisionExhausted
from .exact import grouped_exponents
from .precreal import (
    DEFAULT_PRECISION_CEILING,
    ErrReal,
    big_sum,
    certified_dist,
    certified_frac,
    context_for,
    log_at_bits,
    _pow2,
)


@dataclass(frozen=True)
class FRecord:
    """Per-n certified results for the F series."""

    n: int
    frac_logSn: ErrReal
    dist_logSn: ErrReal
    F_n: ErrReal
    magnitude_estimate: int  # decimal exponent of log S(n)
    precision_bits: int


@dataclass(frozen=True)
class SkipRecord:
    """Placeholder for an n whose computation hit the precision ceiling."""

    n: int
    reason: str
    status: str = "skip"


def working_digits(n: int, out_digits: int) -> int:
    """Decimal working digits for index n at the requested output digits."""
    return math.ceil(2 * n * math.log10(2 * math.e)) + 40 + out_digits


def _bits_for(digits: int) -> int:
    return int(digits * math.log2(10)) + 16


def error_floor(n: int) -> float:
    """Smallest abs_err any log S(n) evaluation can certify.

    Each log factor's error word saturates at the smallest positive double
    before being scaled by its exact integer exponent, so the summed bound
    can never drop below 5e-324 * sum(G). This is a property of the
    double-width error word, not of the working precision: escalating bits
    cannot push below it.
    """
    total = sum(grouped_exponents(n))
    return _pow2(total.bit_length() - 1073)


def log_sn_value(n: int, bits: int) -> ErrReal:
    """Certified log S(n) at the given working precision."""
    G = grouped_exponents(n)
    # Size of the result in bits, from exact exponent data (float-free so the
    # estimate itself cannot overflow for large n).
    mag_bits = max(g.bit_length() for g in G) + max(1, int(math.log2(math.log(2 * n))) if n > 1 else 1) + 4
    # Each term g*log(n+m) may err by g * (3 ulps of the log factor); sizing
    # the factor's precision so that this stays below 2^(mag_bits - bits)
    # per term keeps the certified sum accurate to ~bits significant bits.
    # All sizing is integer bit arithmetic: the targets themselves can be far
    # below the double underflow threshold at large n.
    len_bits = len(G).bit_length()
    terms = []
    for m, g in enumerate(G, start=1):
        lg_bits = max(64, bits - mag_bits + g.bit_length() + len_bits + 16)
        lg = log_at_bits(n + m, lg_bits)
        terms.append(lg.mul_int(g, bits=bits))
    return big_sum(terms, bits=bits)


def log_sn_reduced(
    n: int,
    out_digits: int = 15,
    precision_ceiling: int = DEFAULT_PRECISION_CEILING,
) -> FRecord:
    """Certified frac/dist/F(n), escalating precision until the output digits
    are stable and no integer boundary is straddled."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if out_digits < 1:
        raise ValueError("out_digits must be >= 1")
    target = 0.5 * 10.0 ** (-out_digits - 1)
    floor_err = error_floor(n)
    if floor_err > 0.25 * target:
        raise PrecisionExhausted(
            f"n={n}: the double error word floors the certifiable error at "
            f"{floor_err:.3g}, above the {out_digits}-digit target; "
            f"fewer output digits would extend the range slightly"
        )
    bits = _bits_for(working_digits(n, out_digits))
    last = "start"
    while bits <= precision_ceiling:
        try:
            logS = log_sn_value(n, bits)
            frac = certified_frac(logS)
            dist = certified_dist(logS)
            F = dist.log().div(ErrReal.from_int(n, 64))
            if frac.abs_err > target or F.abs_err > target:
                last = f"output digits not stable at {bits} bits"
                bits *= 2
                continue
            mag = int(gmpy2.floor(gmpy2.log10(logS.value)))
            return FRecord(
                n=n,
                frac_logSn=frac,
                dist_logSn=dist,
                F_n=F,
                magnitude_estimate=mag,
                precision_bits=bits,
            )
        except AmbiguousBoundary as exc:
            last = str(exc)
            bits *= 2
    raise PrecisionExhausted(f"n={n}: {last} (ceiling {precision_ceiling} bits)")


def f_of_n(
    n: int,
    out_digits: int = 15,
    precision_ceiling: int = DEFAULT_PRECISION_CEILING,
) -> ErrReal:
    return log_sn_reduced(n, out_digits, precision_ceiling).F_n


# ---------------------------------------------------------------------------
# rendering: the checkpoint/CSV/JSON layers all consume the same fixed-point
# rendering so that fresh and resumed runs emit identical bytes.
# ---------------------------------------------------------------------------

def render_frecord(rec: Union[FRecord, SkipRecord], digits: int) -> dict:
    if isinstance(rec, SkipRecord):
        return {"n": rec.n, "status": "skip", "reason": rec.reason}
    return {
        "n": rec.n,
        "status": "ok",
        "bits": rec.precision_bits,
        "frac": format(rec.frac_logSn.value, f".{digits}f"),
        "frac_err": repr(rec.frac_logSn.abs_err),
        "dist": format(rec.dist_logSn.value, f".{digits}f"),
        "dist_err": repr(rec.dist_logSn.abs_err),
        "F": format(rec.F_n.value, f".{digits}f"),
        "F_err": repr(rec.F_n.abs_err),
        "mag": rec.magnitude_estimate,
    }


def _compute_rendered(args: tuple) -> dict:
    n, out_digits, ceiling = args
    try:
        return render_frecord(log_sn_reduced(n, out_digits, ceiling), out_digits)
    except PrecisionExhausted as exc:
        return {"n": n, "status": "skip", "reason": str(exc)}


def f_series_rendered(
    n_lo: int,
    n_hi: int,
    out_digits: int = 15,
    precision_ceiling: int = DEFAULT_PRECISION_CEILING,
    done: Optional[dict] = None,
    on_record: Optional[Callable[[dict], None]] = None,
    workers: int = 1,
) -> list[dict]:
    """Rendered records for n in [n_lo, n_hi], in n order.

    `done` maps n -> already-rendered record (from a checkpoint); those n are
    not recomputed. `on_record` fires once per newly computed record, in n
    order, for incremental checkpointing. Output order and bytes are
    independent of `workers`.
    """
    if not (1 <= n_lo <= n_hi):
        raise ValueError("need 1 <= n_lo <= n_hi")
    done = dict(done or {})
    todo = [n for n in range(n_lo, n_hi + 1) if n not in done]
    fresh: dict[int, dict] = {}
    if workers > 1 and len(todo) > 1:
        from concurrent.futures import ProcessPoolExecutor

        with ProcessPoolExecutor(max_workers=workers) as pool:
            for rec in pool.map(
                _compute_rendered,
                [(n, out_digits, precision_ceiling) for n in todo],
            ):
                fresh[rec["n"]] = rec
    else:
        for n in todo:
            fresh[n] = _compute_rendered((n, out_digits, precision_ceiling))
    if on_record is not None:
        for n in sorted(fresh):
            on_record(fresh[n])
    merged = {**done, **fresh}
    return [merged[n] for n in range(n_lo, n_hi + 1)]


def f_series(
    n_lo: int,
    n_hi: int,
    out_digits: int = 15,
    precision_ceiling: int = DEFAULT_PRECISION_CEILING,
) -> Iterable[Union[FRecord, SkipRecord]]:
    """Library-level series: full FRecords (with ErrReals), skips marked."""
    for n in range(n_lo, n_hi + 1):
        try:
            yield log_sn_reduced(n, out_digits, precision_ceiling)
        except PrecisionExhausted as exc:
            yield SkipRecord(n=n, reason=str(exc))
