import math
from fractions import Fraction

import pytest

from eulerforms.integral import integral_In
from eulerforms.errors import PrecisionExhausted


def _frac(err):
    num, den = err.value.as_integer_ratio()
    return Fraction(num, den)


@pytest.mark.parametrize("n", [1, 3, 5, 10])
def test_forty_digit_values(oracles, n):
    """Tight targets reproduce independently captured 40 digit values."""
    want = Fraction(oracles["In"][str(n)])
    target = float(want) * 1e-40
    got = integral_In(n, target_abs_err=target)
    assert got.abs_err <= target
    # the oracle string itself is rounded in its 40th significant digit
    assert abs(_frac(got) - want) <= Fraction(got.abs_err) + want * Fraction(1, 10 ** 38)


@pytest.mark.parametrize("n", [2, 8, 16, 40])
def test_default_target_bounds(n):
    val = integral_In(n)
    assert val.abs_err <= 1e-10 * 4.0 ** (-2 * n)
    assert float(val.value) > 0
    # strict window: 0 < I(n) < 4^(-2n)
    assert _frac(val) + Fraction(val.abs_err) < Fraction(4) ** (-2 * n)


def test_cache_serves_tight_values():
    tight = integral_In(3, target_abs_err=1e-30)
    again = integral_In(3)
    assert again.value == tight.value
    assert again.abs_err <= 1e-10 * 4.0 ** (-6)


def test_domain_errors():
    with pytest.raises(ValueError):
        integral_In(0)
    with pytest.raises(ValueError):
        integral_In(2, target_abs_err=-1.0)
    with pytest.raises(PrecisionExhausted):
        integral_In(500)


def test_magnitude_tracks_the_window():
    """log10 I(n) hugs -2n*log10(4) with a bounded offset."""
    for n in (1, 4, 9, 14):
        v = integral_In(n)
        log10v = math.log10(float(v.value))
        assert -2 * n * math.log10(4.0) - 3.5 < log10v < -2 * n * math.log10(4.0)
