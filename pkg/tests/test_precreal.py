import math
import random
from fractions import Fraction

import gmpy2
import mpmath
import pytest
from hypothesis import given, settings, strategies as st

from eulerforms.precreal import (ErrReal, big_sum, log_of_int, certified_floor,
                                 certified_frac, certified_dist,
                                 mpfr_floor_exact, float_approx_up,
                                 float_approx_down)
from eulerforms.errors import AmbiguousBoundary


def test_mpfr_floor_exact_rounding_traps():
    # mpz()/int() on mpfr round to nearest-even; floor must truncate instead
    x = gmpy2.mpfr("2.77", precision=80)
    assert mpfr_floor_exact(x) == 2
    assert mpfr_floor_exact(gmpy2.mpfr("1.5", precision=80)) == 1
    assert mpfr_floor_exact(gmpy2.mpfr("2.5", precision=80)) == 2
    assert mpfr_floor_exact(gmpy2.mpfr("-1.5", precision=80)) == -2
    assert mpfr_floor_exact(gmpy2.mpfr(7, precision=80)) == 7
    assert mpfr_floor_exact(gmpy2.mpfr("-0.25", precision=80)) == -1


def test_from_int_and_fraction_exactness():
    x = ErrReal.from_int(12345, 80)
    assert x.abs_err == 0.0
    y = ErrReal.from_fraction(Fraction(1, 3), 100)
    assert 0 < y.abs_err < 1e-29
    assert abs(float(y.value) - 1 / 3) < 1e-15


def test_log_of_int_matches_reference():
    mpmath.mp.dps = 60
    for n in (2, 10, 97, 10 ** 12 + 39):
        got = log_of_int(n, 1e-40)
        want = mpmath.log(n)
        assert abs(mpmath.mpf(format(got.value, ".50g")) - want) < 1e-39
        assert got.abs_err <= 1e-40


def test_certified_floor_and_frac():
    # an exactly representable 3.5 has zero error: its floor is well defined
    x = ErrReal.from_fraction(Fraction(7, 2), 120)
    assert certified_floor(x) == 3
    # an interval straddling the integer 3 is genuinely ambiguous
    with pytest.raises(AmbiguousBoundary):
        certified_floor(ErrReal.from_int(3, 120).widen(1e-20))
    y = ErrReal.from_fraction(Fraction(27, 8), 120)
    assert certified_floor(y) == 3
    f = certified_frac(y)
    assert abs(float(f.value) - 0.375) < 1e-30
    d = certified_dist(y)
    assert abs(float(d.value) - 0.375) < 1e-30
    z = ErrReal.from_fraction(Fraction(61, 8), 120)
    assert abs(float(certified_dist(z).value) - 0.375) < 1e-30


class _TooBig(Exception):
    """Reference value left the range the containment check cares about."""


def _reference_eval(ops, dps=120):
    mpmath.mp.dps = dps
    stack = []
    for tag, payload in ops:
        if stack and abs(stack[-1]) > mpmath.mpf("1e300"):
            # Chained exponentials can grow mpf exponents into billion-bit
            # integers; the test skips |ref| > 1e280 anyway, so bail early.
            raise _TooBig
        if tag == "lit":
            stack.append(mpmath.mpf(payload.numerator) / payload.denominator)
        elif tag == "add":
            b, a = stack.pop(), stack.pop()
            stack.append(a + b)
        elif tag == "sub":
            b, a = stack.pop(), stack.pop()
            stack.append(a - b)
        elif tag == "mul":
            b, a = stack.pop(), stack.pop()
            stack.append(a * b)
        elif tag == "div":
            b, a = stack.pop(), stack.pop()
            stack.append(a / (abs(b) + 1))
        elif tag == "log":
            a = stack.pop()
            stack.append(mpmath.log(abs(a) + 1))
        elif tag == "exp":
            a = stack.pop()
            stack.append(mpmath.exp(a / 16))
    return stack[-1]


def _errreal_eval(ops, bits):
    one = ErrReal.from_int(1, bits)
    stack = []
    for tag, payload in ops:
        if tag == "lit":
            stack.append(ErrReal.from_fraction(payload, bits))
        elif tag == "add":
            b, a = stack.pop(), stack.pop()
            stack.append(a.add(b, bits=bits))
        elif tag == "sub":
            b, a = stack.pop(), stack.pop()
            stack.append(a.sub(b, bits=bits))
        elif tag == "mul":
            b, a = stack.pop(), stack.pop()
            stack.append(a.mul(b, bits=bits))
        elif tag == "div":
            b, a = stack.pop(), stack.pop()
            stack.append(a.div(b.abs().add(one, bits=bits), bits=bits))
        elif tag == "log":
            a = stack.pop()
            stack.append(a.abs().add(one, bits=bits).log(bits=bits))
        elif tag == "exp":
            a = stack.pop()
            stack.append(a.div(ErrReal.from_int(16, bits), bits=bits).exp(bits=bits))
    return stack[-1]


def _random_program(rng):
    ops = [("lit", Fraction(rng.randint(-900, 900), rng.randint(1, 64)))]
    depth = 1
    for _ in range(rng.randint(1, 7)):
        tag = rng.choice(("add", "sub", "mul", "div", "log", "exp",
                          "add", "mul"))
        if tag in ("add", "sub", "mul", "div"):
            ops.append(("lit", Fraction(rng.randint(-900, 900),
                                        rng.randint(1, 64))))
            depth += 1
        ops.append((tag, None))
    return ops


def test_soundness_bulk_random_expressions():
    """Criterion-9 scale: 10^4 random expressions, two precisions.

    The certified interval at 96 bits must contain both the 192-bit value
    and a 120-digit reference value, and the error bound must not grow
    under precision doubling (beyond the additive floor of the error word).
    """
    rng = random.Random(20250819)
    checked = 0
    for _ in range(10_000):
        ops = _random_program(rng)
        try:
            coarse = _errreal_eval(ops, 96)
            fine = _errreal_eval(ops, 192)
        except AmbiguousBoundary:
            # A saturated intermediate (value overflow, error word = inf) can
            # push a guarded domain check over its edge; declining to answer
            # is the sound response, not a containment failure.
            continue
        try:
            ref = _reference_eval(ops)
        except _TooBig:
            continue
        ref_f = float(ref)
        if not math.isfinite(ref_f) or abs(ref_f) > 1e280:
            continue
        diff_cf = abs(float(mpmath.mpf(format(coarse.value, ".60g")) - ref))
        diff_ff = abs(float(mpmath.mpf(format(fine.value, ".60g")) - ref))
        assert diff_cf <= coarse.abs_err * (1 + 1e-9) + 5e-324, ops
        assert diff_ff <= fine.abs_err * (1 + 1e-9) + 5e-324, ops
        assert fine.abs_err <= coarse.abs_err * (1 + 1e-9) + 5e-324, ops
        checked += 1
    assert checked > 9_000


@given(st.lists(st.fractions(min_value=-1000, max_value=1000), min_size=1, max_size=40))
@settings(max_examples=120, deadline=None)
def test_big_sum_soundness(values):
    terms = [ErrReal.from_fraction(v, 80) for v in values]
    total = big_sum(terms, bits=80)
    exact = sum(values, Fraction(0))
    err = abs(Fraction(*total.value.as_integer_ratio()) - exact)
    assert float(err) <= total.abs_err * (1 + 1e-12) + 5e-324


def test_float_approx_directions():
    x = ErrReal.from_fraction(Fraction(1, 3), 120)
    lo = Fraction(float_approx_down(x.value))
    hi = Fraction(float_approx_up(x.value))
    assert lo <= Fraction(1, 3) <= hi
    assert lo < hi
