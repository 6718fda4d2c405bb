"""Arbitrary-precision reals with certified absolute error bounds.

An ErrReal is a pair (value, abs_err): an MPFR value at some working
precision together with a float upper bound on |true - value|. The bound is
maintained soundly:

* the value word is computed with MPFR round-to-nearest at the operation's
  working precision, contributing at most one ulp of the result, which we
  over-count as 2^(1-prec) * 2^exponent(result);
* the bound word is a double, and every arithmetic step on it is followed by
  math.nextafter(..., inf), i.e. directed upward rounding. Doubles round
  correctly, so one nextafter per operation keeps the bound an over-estimate.

Rationale for the two-word design: the value needs thousands of bits, the
bound only needs an order of magnitude, and a float bound makes the upward
rounding discipline trivial to audit.

gmpy2 discipline (learned the hard way): bare operators on mpfr values round
through the *thread-default* context, which is 53 bits unless changed. Every
operation below therefore goes through an explicit per-precision context
object. Do not "simplify" a context call back to an operator.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable, Union

import gmpy2

from .errors import AmbiguousBoundary, PrecisionExhausted

_CTX_CACHE: dict[int, gmpy2.context] = {}

#: Hard ceiling on working precision (bits) used by the escalation helpers.
DEFAULT_PRECISION_CEILING = 2_000_000


def context_for(bits: int) -> gmpy2.context:
    """A round-to-nearest MPFR context at the given precision, cached."""
    try:
        return _CTX_CACHE[bits]
    except KeyError:
        if bits < 2:
            raise ValueError("precision must be >= 2 bits") from None
        ctx = gmpy2.context(precision=bits)
        _CTX_CACHE[bits] = ctx
        return ctx


def _up(x: float) -> float:
    """Next float toward +inf; the one-sided rounding step for bounds."""
    if math.isnan(x):
        # inf * 0 inside an error-bound product; inf is the only safe answer.
        return math.inf
    return math.nextafter(x, math.inf)


def _ulp_bound(value: "gmpy2.mpfr", bits: int) -> float:
    """An upper bound on one rounding error of `value` at `bits` precision.

    2^(exp - bits + 1) where 2^(exp-1) <= |value| < 2^exp. Zero for zero.
    """
    if gmpy2.is_zero(value):
        return 0.0
    if not gmpy2.is_finite(value):
        return math.inf
    # mpfr_get_exp convention: 0.5 <= |mantissa| < 1, value = mantissa*2^exp
    exp = gmpy2.get_exp(value)
    return _pow2(exp - bits + 1)


def _pow2(e: int) -> float:
    """2.0**e without overflow surprises; saturates at the double range."""
    if e > 1023:
        return math.inf
    if e < -1074:
        # Underflow to zero would UNDER-estimate an error bound, so round the
        # exponent up to the smallest positive double instead.
        return 5e-324
    return math.ldexp(1.0, e)


@dataclass(frozen=True)
class ErrReal:
    """value +- abs_err at a given working precision. Immutable."""

    value: "gmpy2.mpfr"
    abs_err: float
    precision_bits: int

    def __post_init__(self) -> None:
        if not gmpy2.is_finite(self.value):
            # An overflowed or undefined value carries no usable bound; any
            # error word computed from it (often NaN via inf*0) is noise.
            object.__setattr__(self, "abs_err", math.inf)
            return
        if self.abs_err < 0 or math.isnan(self.abs_err):
            raise ValueError("abs_err must be a nonnegative float")

    # -- constructors -----------------------------------------------------

    @staticmethod
    def from_int(x: int, bits: int) -> "ErrReal":
        v = gmpy2.mpfr(x, precision=bits)
        err = 0.0 if int(x).bit_length() <= bits else _ulp_bound(v, bits)
        return ErrReal(v, err, bits)

    @staticmethod
    def from_fraction(x: Fraction, bits: int) -> "ErrReal":
        ctx = context_for(bits)
        num = gmpy2.mpfr(x.numerator, precision=max(bits, x.numerator.bit_length() + 2))
        v = ctx.div(num, gmpy2.mpfr(x.denominator, precision=max(bits, x.denominator.bit_length() + 2)))
        # one div rounding plus (possibly) numerator/denominator rounding;
        # 3 ulps is a lazy but sound cover for all of it
        return ErrReal(v, _up(3.0 * _ulp_bound(v, bits)), bits)

    @staticmethod
    def exact_zero(bits: int = 64) -> "ErrReal":
        return ErrReal(gmpy2.mpfr(0, precision=bits), 0.0, bits)

    # -- interval views ----------------------------------------------------

    def lower(self) -> "gmpy2.mpfr":
        """A float lower edge of the certified interval (value - abs_err),
        rounded down."""
        ctx = gmpy2.context(precision=self.precision_bits, round=gmpy2.RoundDown)
        return ctx.sub(self.value, gmpy2.mpfr(self.abs_err, precision=64))

    def upper(self) -> "gmpy2.mpfr":
        ctx = gmpy2.context(precision=self.precision_bits, round=gmpy2.RoundUp)
        return ctx.add(self.value, gmpy2.mpfr(self.abs_err, precision=64))

    def contains_zero(self) -> bool:
        return self.lower() <= 0 <= self.upper()

    def __float__(self) -> float:
        return float(self.value)

    def __repr__(self) -> str:  # keep short; full rendering is the CLI's job
        return f"ErrReal({format(self.value, '.12g')} ± {self.abs_err:.3g} @{self.precision_bits}b)"

    # -- arithmetic --------------------------------------------------------

    def _bits_with(self, other: "ErrReal", bits: Union[int, None]) -> int:
        if bits is not None:
            return bits
        return max(self.precision_bits, other.precision_bits)

    def add(self, other: "ErrReal", bits: Union[int, None] = None) -> "ErrReal":
        b = self._bits_with(other, bits)
        ctx = context_for(b)
        v = ctx.add(self.value, other.value)
        err = _up(_up(self.abs_err + other.abs_err) + _ulp_bound(v, b))
        return ErrReal(v, err, b)

    def sub(self, other: "ErrReal", bits: Union[int, None] = None) -> "ErrReal":
        b = self._bits_with(other, bits)
        ctx = context_for(b)
        v = ctx.sub(self.value, other.value)
        err = _up(_up(self.abs_err + other.abs_err) + _ulp_bound(v, b))
        return ErrReal(v, err, b)

    def neg(self) -> "ErrReal":
        ctx = context_for(self.precision_bits)
        return ErrReal(ctx.minus(self.value), self.abs_err, self.precision_bits)

    def abs(self) -> "ErrReal":
        if self.value < 0:
            return self.neg()
        return self

    def mul(self, other: "ErrReal", bits: Union[int, None] = None) -> "ErrReal":
        b = self._bits_with(other, bits)
        ctx = context_for(b)
        v = ctx.mul(self.value, other.value)
        a_mag = _up(abs(float_approx_up(self.value)) + self.abs_err)
        b_mag = _up(abs(float_approx_up(other.value)) + other.abs_err)
        cross = _up(_up(a_mag * other.abs_err) + _up(b_mag * self.abs_err))
        err = _up(cross + _ulp_bound(v, b))
        return ErrReal(v, err, b)

    def mul_int(self, c: int, bits: Union[int, None] = None) -> "ErrReal":
        b = bits if bits is not None else self.precision_bits
        ctx = context_for(b)
        v = ctx.mul(self.value, gmpy2.mpfr(c, precision=max(b, int(c).bit_length() + 2)))
        err = _up(_up(abs(c) * self.abs_err) + _ulp_bound(v, b))
        return ErrReal(v, err, b)

    def div(self, other: "ErrReal", bits: Union[int, None] = None) -> "ErrReal":
        b = self._bits_with(other, bits)
        denom_lo = abs(float_approx_down(other.value)) - other.abs_err
        if denom_lo <= 0:
            raise AmbiguousBoundary("divisor interval touches zero")
        ctx = context_for(b)
        v = ctx.div(self.value, other.value)
        q_mag = _up(abs(float_approx_up(v)) + 1e-300)
        num = _up(self.abs_err + _up(q_mag * other.abs_err))
        err = _up(num / denom_lo)  # division of upward-rounded positives
        err = _up(_up(err * (1 + 1e-15)) + _ulp_bound(v, b))
        return ErrReal(v, err, b)

    def log(self, bits: Union[int, None] = None) -> "ErrReal":
        """Natural log. Requires the whole interval to be positive."""
        b = bits if bits is not None else self.precision_bits
        x_lo = float_approx_down(self.value) - self.abs_err
        if x_lo <= 0:
            raise AmbiguousBoundary("log of an interval touching (-inf, 0]")
        ctx = context_for(b)
        v = ctx.log(self.value)
        # |log x - log x~| <= err / min(x, x~) = err / x_lo
        err = _up(_up(self.abs_err / x_lo) + _ulp_bound(v, b))
        return ErrReal(v, err, b)

    def exp(self, bits: Union[int, None] = None) -> "ErrReal":
        b = bits if bits is not None else self.precision_bits
        ctx = context_for(b)
        v = ctx.exp(self.value)
        # d/dx e^x = e^x; bound the derivative on the interval by
        # e^(value+err) <= v * e^err (and e^err <= 1/(1-err) for err < 1).
        if self.abs_err >= 0.5:
            scale = math.exp(_up(self.abs_err)) if self.abs_err < 700 else math.inf
        else:
            scale = _up(1.0 / (1.0 - self.abs_err))
        mag = _up(abs(float_approx_up(v)) * scale)
        err = _up(_up(mag * self.abs_err) + _ulp_bound(v, b))
        if math.isnan(err):
            err = math.inf  # 0 * inf from a saturated factor: no bound
        return ErrReal(v, err, b)

    def widen(self, extra_abs_err: float) -> "ErrReal":
        return ErrReal(self.value, _up(self.abs_err + extra_abs_err), self.precision_bits)


def float_approx_up(x: "gmpy2.mpfr") -> float:
    """float(x) nudged so that |result| >= |x| (for bound arithmetic)."""
    f = float(x)
    if math.isinf(f):
        return f
    return _up(abs(f)) * (1.0 if f >= 0 else -1.0)


def float_approx_down(x: "gmpy2.mpfr") -> float:
    """float(x) nudged toward zero, so |result| <= |x|."""
    f = float(x)
    if f == 0.0:
        # x may be a tiny nonzero mpfr that underflows float; returning 0.0
        # only ever weakens (widens) downstream bounds, never unsounds them.
        return 0.0
    return math.nextafter(f, 0.0)


def big_sum(terms: Iterable[ErrReal], bits: Union[int, None] = None) -> ErrReal:
    """Sum with per-step rounding accounted. Empty sum is exact zero."""
    terms = list(terms)
    if not terms:
        return ErrReal.exact_zero(bits or 64)
    b = bits if bits is not None else max(t.precision_bits for t in terms)
    ctx = context_for(b)
    acc = gmpy2.mpfr(0, precision=b)
    err = 0.0
    for t in terms:
        acc = ctx.add(acc, t.value)
        err = _up(_up(err + t.abs_err) + _ulp_bound(acc, b))
    return ErrReal(acc, err, b)


def log_of_int(
    x: int,
    target_abs_err: float,
    precision_ceiling: int = DEFAULT_PRECISION_CEILING,
) -> ErrReal:
    """Natural log of a positive integer with abs_err <= target_abs_err."""
    if x < 1:
        raise ValueError("x must be >= 1")
    if target_abs_err <= 0:
        raise ValueError("target_abs_err must be positive")
    if x == 1:
        return ErrReal(gmpy2.mpfr(0, precision=64), 0.0, 64)
    magnitude = math.log2(max(2.0, math.log(x) if x.bit_length() < 1020 else x.bit_length() * 0.6932))
    bits = int(max(64, magnitude - math.log2(target_abs_err) + 16))
    while bits <= precision_ceiling:
        ctx = context_for(bits)
        v = ctx.log(gmpy2.mpfr(x, precision=max(bits, x.bit_length() + 2)))
        err = _up(3.0 * _ulp_bound(v, bits))
        if err <= target_abs_err:
            return ErrReal(v, err, bits)
        bits *= 2
    raise PrecisionExhausted(
        f"log_of_int({x}) cannot reach {target_abs_err} under {precision_ceiling} bits"
    )


def log_at_bits(x: int, bits: int) -> ErrReal:
    """Natural log of a positive integer at a fixed working precision.

    Companion to log_of_int for callers that size the precision themselves
    (e.g. when the wanted absolute error is below the double range and only
    the scaled, summed error needs to be representable). The error word
    saturates at the smallest positive double, which is still a sound upper
    bound because _pow2 rounds underflowing exponents up.
    """
    if x < 1:
        raise ValueError("x must be >= 1")
    if x == 1:
        return ErrReal(gmpy2.mpfr(0, precision=64), 0.0, 64)
    b = max(64, bits)
    ctx = context_for(b)
    v = ctx.log(gmpy2.mpfr(x, precision=max(b, x.bit_length() + 2)))
    return ErrReal(v, _up(3.0 * _ulp_bound(v, b)), b)


def mpfr_floor_exact(x: "gmpy2.mpfr") -> "gmpy2.mpz":
    """floor(x) as an exact mpz.

    Neither gmpy2.floor() nor mpz(mpfr) is usable here: floor() rounds its
    RESULT through the ambient context (53 bits by default), and mpz()/int()
    round to nearest-even rather than truncating. as_integer_ratio() is exact
    (mantissa over a power of two) and mpz floor division rounds toward -inf,
    so their composition is the true floor at any width.
    """
    num, den = x.as_integer_ratio()
    return num // den


def certified_floor(x: ErrReal) -> int:
    """The integer floor of the true value, certified from the interval.

    Raises AmbiguousBoundary when [value-err, value+err] straddles an
    integer, because then floor(true) is genuinely unknown.
    """
    if not math.isfinite(x.abs_err):
        raise AmbiguousBoundary("error bound is infinite")
    lo = x.lower()
    hi = x.upper()
    f_lo = mpfr_floor_exact(lo)
    f_hi = mpfr_floor_exact(hi)
    if f_lo != f_hi:
        raise AmbiguousBoundary(
            f"interval [{format(lo, '.6g')}, {format(hi, '.6g')}] straddles an integer"
        )
    return int(f_lo)


def certified_frac(x: ErrReal) -> ErrReal:
    """Fractional part {x} in [0, 1), same abs_err, via certified_floor."""
    if x.abs_err >= 0.25:
        raise AmbiguousBoundary("abs_err too large to certify a fractional part")
    n = certified_floor(x)
    b = x.precision_bits
    ctx = context_for(b)
    v = ctx.sub(x.value, gmpy2.mpfr(n, precision=max(b, int(n).bit_length() + 2)))
    # subtraction of the exact floor: value rounding only
    err = _up(x.abs_err + _ulp_bound(v, b))
    return ErrReal(v, err, b)


def certified_dist(x: ErrReal) -> ErrReal:
    """Distance from x to the nearest integer, in [0, 1/2].

    The nearest-integer map is only discontinuous at integers (the value 0),
    so the integer-straddle check of certified_frac is exactly the right
    guard; half-integers are a smooth maximum and pass through with the
    same error bound.
    """
    fr = certified_frac(x)
    b = fr.precision_bits
    ctx = context_for(b)
    one_minus = ctx.sub(gmpy2.mpfr(1, precision=b), fr.value)
    if fr.value <= one_minus:
        return fr
    err = _up(fr.abs_err + _ulp_bound(one_minus, b))
    return ErrReal(one_minus, err, b)


def escalate(fn, start_bits: int, ceiling: int = DEFAULT_PRECISION_CEILING):
    """Run fn(bits), doubling bits on AmbiguousBoundary up to ceiling.

    The standard retry loop for boundary-sensitive pipelines.
    """
    bits = start_bits
    last_exc: Exception | None = None
    while bits <= ceiling:
        try:
            return fn(bits)
        except AmbiguousBoundary as exc:
            last_exc = exc
            bits *= 2
    raise PrecisionExhausted(
        f"still ambiguous at {ceiling} bits: {last_exc}"
    )
