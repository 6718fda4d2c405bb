"""Certified providers for the constants the pipelines consume:
Euler's constant gamma, e, ln 2, and pi.

Each provider returns an ErrReal with abs_err <= 10^-digits. gamma is the
load-bearing one: it is computed with the Bessel-series scheme of Brent and
McMillan (the U/V form with the log folded into the numerator series), and
on first use the result is checked against a bundled reference-digits file;
a mismatch is a hard fault (SelfCheckFailed) because it would poison every
integer-combination check downstream.

e, ln2 and pi use scaled-integer series (exp series at 1, atanh(1/3), and
Machin's 16 atan(1/5) - 4 atan(1/239)), which are certified by construction:
all arithmetic is on Python ints with explicit truncation accounting.
"""
from __future__ import annotations

import math
import threading
from dataclasses import dataclass
from importlib import resources

import gmpy2

from .errors import OverCap, PrecisionExhausted, SelfCheckFailed
from .precreal import ErrReal, context_for, _pow2, _ulp_bound, _up

# The certificate on a constant is a float error word; floats bottom out at
# 5e-324, so a promise of 10^-digits stops being expressible a little past
# 300 digits. Cap requests where the certificate still means something.
MAX_DIGITS = 300

_REFERENCE_FILE = "euler_gamma_2000.txt"

_lock = threading.Lock()
_cache: dict[str, ErrReal] = {}
_self_checked = False


@dataclass(frozen=True)
class ConstRequest:
    name: str  # one of gamma, e, ln2, pi
    digits: int

    def __post_init__(self) -> None:
        if self.name not in ("gamma", "e", "ln2", "pi"):
            raise ValueError(f"unknown constant {self.name!r}")
        if self.digits < 1:
            raise ValueError("digits must be >= 1")
        if self.digits > MAX_DIGITS:
            raise OverCap(f"{self.digits} digits over the {MAX_DIGITS} cap")


def _bits_for_digits(digits: int) -> int:
    return int(digits * math.log2(10)) + 32


# ---------------------------------------------------------------------------
# scaled-integer series: every term is a floor division of an exact integer,
# so each contributes less than 1 to the scaled sum; the final bound is
# (#terms + tail) ulps of the scale.
# ---------------------------------------------------------------------------

def _ln2_scaled(scale_digits: int) -> tuple[int, int]:
    """(floor(ln2 * 10^scale_digits), error_ulps). atanh series at 1/3:
    ln 2 = 2 * sum_{i>=0} (1/3)^(2i+1) / (2i+1)."""
    T = 10 ** scale_digits
    p = (2 * T) // 3
    total = 0
    i = 0
    terms = 0
    while p:
        total += p // (2 * i + 1)
        p //= 9
        i += 1
        terms += 1
    # each floor division truncates < 1; tail after p hits 0 is < 1
    return total, terms + 1


def _e_scaled(scale_digits: int) -> tuple[int, int]:
    """(floor(e * 10^scale_digits), error_ulps) via sum 1/k!."""
    T = 10 ** scale_digits
    total = T  # k = 0
    term = T
    k = 1
    terms = 0
    while term:
        term //= k
        total += term
        k += 1
        terms += 1
    return total, terms + 1


def _atan_inv_scaled(x: int, T: int) -> tuple[int, int]:
    """(floor(atan(1/x) * T), error_ulps) for integer x >= 2."""
    p = T // x
    x2 = x * x
    total = 0
    i = 0
    terms = 0
    while p:
        term = p // (2 * i + 1)
        total += -term if i % 2 else term
        p //= x2
        i += 1
        terms += 1
    # alternating series: truncation < first dropped term < 1 ulp
    return total, terms + 2


def _pi_scaled(scale_digits: int) -> tuple[int, int]:
    T = 10 ** scale_digits
    a5, e5 = _atan_inv_scaled(5, T)
    a239, e239 = _atan_inv_scaled(239, T)
    return 16 * a5 - 4 * a239, 16 * e5 + 4 * e239


def _scaled_to_errreal(scaled: int, ulps: int, scale_digits: int, digits: int) -> ErrReal:
    bits = _bits_for_digits(digits)
    ctx = context_for(bits)
    denom = 10 ** scale_digits
    wide = max(bits, scaled.bit_length() + 2, denom.bit_length() + 2)
    num = gmpy2.mpfr(scaled, precision=wide)
    den = gmpy2.mpfr(denom, precision=wide)
    v = ctx.div(num, den)
    err = _up(_up((ulps + 1) * 10.0 ** (-scale_digits)) + 2.0 * _ulp_bound(v, bits))
    return ErrReal(v, err, bits)


# ---------------------------------------------------------------------------
# gamma: Brent-McMillan B1
# ---------------------------------------------------------------------------

def _gamma_bessel(digits: int) -> ErrReal:
    """gamma with abs_err <= 10^-digits, no reference file involved.

    U = sum_k B_k (H_k - ln n), V = sum_k B_k with B_k = (n^k / k!)^2;
    gamma = U/V + O(e^{-4n}), |error| <= 4 e^{-4n} for n >= 4.
    n is a power of two so ln n = j ln 2 comes from the certified integer
    series, keeping this path free of MPFR's own constants.
    """
    guard = 18
    prec = _bits_for_digits(digits + guard)
    ctx = context_for(prec)
    n = 4
    j = 2
    while 4 * n < (digits + 8) * math.log(10):
        n *= 2
        j += 1
    # ln n = j * ln 2 from the scaled-integer series
    sd = digits + guard
    ln2_scaled, ln2_ulps = _ln2_scaled(sd)
    ln2 = _scaled_to_errreal(ln2_scaled, ln2_ulps, sd, digits + guard)
    lnn = ln2.mul_int(j, bits=prec)

    a = ctx.minus(lnn.value)
    b = gmpy2.mpfr(1, precision=prec)
    U = a
    V = b
    n2 = gmpy2.mpfr(n * n, precision=prec)
    k = 1
    kmax = 5 * n + 40
    thresh = gmpy2.mpfr(2, precision=prec) ** (-(prec - 8))
    while k <= kmax:
        kk = gmpy2.mpfr(k * k, precision=prec)
        b = ctx.div(ctx.mul(b, n2), kk)
        a = ctx.add(
            ctx.div(ctx.mul(a, n2), kk),
            ctx.div(b, gmpy2.mpfr(k, precision=prec)),
        )
        U = ctx.add(U, a)
        V = ctx.add(V, b)
        if k > n and abs(a) < abs(U) * thresh and b < V * thresh:
            break
        k += 1
    else:
        raise PrecisionExhausted("Bessel gamma series did not converge")

    g = ctx.div(U, V)
    # Error budget, all generous over-counts:
    #   method error 4 e^{-4n} <= 10^-(digits+2) by choice of n;
    #   series truncation < threshold-level relative to U, V;
    #   lnn's certified error enters through a_0 scaled by V/V = 1;
    #   rounding: ~6 ops per k, k <= kmax terms, at relative 2^(1-prec),
    #   against a sum of magnitude |U| (no cancellation: terms positive
    #   past the first, and the total rounding is tiny anyway).
    method = 4.0 * math.exp(-4 * n)
    series = 2.0 * _pow2(-(prec - 12))
    rounding = _up(12.0 * kmax * _pow2(-prec + 4))
    err = _up(_up(method + lnn.abs_err) + _up((series + rounding) * _up(abs(float(g)) + 1.0)))
    return ErrReal(g, err, prec)


# ---------------------------------------------------------------------------
# reference file handling
# ---------------------------------------------------------------------------

def _load_reference() -> str:
    text = resources.files("eulerforms.data").joinpath(_REFERENCE_FILE).read_text()
    lines = [ln.strip() for ln in text.splitlines() if ln.strip()]
    header, blocks = lines[0], lines[1:]
    if not header.startswith("euler-gamma"):
        raise SelfCheckFailed(f"unexpected reference header: {header!r}")
    declared = int(header.split()[1])
    digits = "".join(blocks)
    if len(digits) != declared or not digits.isdigit():
        raise SelfCheckFailed(
            f"reference file declares {declared} digits, carries {len(digits)}"
        )
    return digits


def reference_gamma_digits() -> str:
    """The bundled post-decimal digits of gamma (currently 2000)."""
    return _load_reference()


def validate_reference() -> None:
    """Recompute the first 100 digits and compare with the bundled file.

    Called automatically before the first gamma value is served; cheap
    (about a millisecond) and catches a corrupted data file or a broken
    series implementation before anything downstream consumes gamma.
    """
    ref = _load_reference()
    computed = _gamma_bessel(110)
    got = format(computed.value, ".108f")
    if not got.startswith("0."):
        raise SelfCheckFailed(f"gamma self-check produced {got[:20]}...")
    if got[2:102] != ref[:100]:
        raise SelfCheckFailed(
            "computed gamma disagrees with the bundled reference digits:\n"
            f"  computed {got[2:42]}...\n  reference {ref[:40]}..."
        )


def const_value(req: ConstRequest) -> ErrReal:
    """The requested constant with abs_err <= 10^-digits.

    Values are cached at the highest precision computed so far and served
    as prefixes, which also makes repeated requests deterministic.
    """
    global _self_checked
    digits = req.digits
    with _lock:
        cached = _cache.get(req.name)
        if cached is not None and cached.abs_err <= 10.0 ** (-digits):
            return cached
        if req.name == "gamma":
            if not _self_checked:
                validate_reference()
                _self_checked = True
            value = _gamma_bessel(digits)
        elif req.name == "e":
            sd = digits + 12
            value = _scaled_to_errreal(*_e_scaled(sd), sd, digits)
        elif req.name == "ln2":
            sd = digits + 12
            value = _scaled_to_errreal(*_ln2_scaled(sd), sd, digits)
        else:  # pi
            sd = digits + 12
            value = _scaled_to_errreal(*_pi_scaled(sd), sd, digits)
        if value.abs_err > 10.0 ** (-digits):
            raise SelfCheckFailed(
                f"{req.name} provider missed its target: {value.abs_err} > 1e-{digits}"
            )
        _cache[req.name] = value
        return value


def gamma(digits: int) -> ErrReal:
    return const_value(ConstRequest("gamma", digits))
