import math
from fractions import Fraction

import gmpy2
import pytest

from eulerforms.cf import (cf_expand, cf_convergents, mu_estimate,
                           beta_estimate, equivalent_exponent)
from eulerforms.constants import ConstRequest, const_value, gamma
from eulerforms.precreal import ErrReal
from eulerforms.errors import AmbiguousQuotient


def _sqrt2(bits=600, slack=1e-150):
    with gmpy2.context(precision=bits):
        v = gmpy2.sqrt(gmpy2.mpfr(2))
    num, den = v.as_integer_ratio()
    return ErrReal.from_fraction(Fraction(int(num), int(den)), bits).widen(slack)


def test_rational_terminates():
    assert cf_expand(Fraction(13, 4), 10) == [3, 4]
    assert cf_expand(7, 5) == [7]
    assert cf_expand(Fraction(-7, 3), 10) == [-3, 1, 2]


def test_quotients_match_references(oracles):
    assert cf_expand(_sqrt2(), 8) == oracles["cf_sqrt2"]
    e60 = const_value(ConstRequest("e", 60))
    assert cf_expand(e60, 10) == oracles["cf_e"]
    assert cf_expand(gamma(60), 10) == oracles["cf_gamma"]


def test_interval_too_wide_raises():
    # widen a fine value instead of requesting a coarse one: the constant
    # cache may already hold more digits than the request asked for
    wide = gamma(60).widen(1e-10)
    with pytest.raises(AmbiguousQuotient):
        cf_expand(wide, 40)


def test_convergents_invariants():
    quots = cf_expand(_sqrt2(), 14)
    recs = cf_convergents(quots)
    # the last quotient is spent bounding the tail, not emitted as a record
    assert [r.a_k for r in recs] == quots[:-1]
    for prev, cur in zip(recs, recs[1:]):
        det = cur.p_k * prev.q_k - prev.p_k * cur.q_k
        assert det in (1, -1)
    for r in recs[1:]:
        assert r.err_hi < Fraction(1, r.q_k ** 2)
        assert 0 < r.err_lo <= r.err_hi
        assert r.err.abs_err >= float(r.err_hi - r.err_lo) / 2


def test_sqrt2_exponent_settles_near_two():
    recs = cf_convergents(cf_expand(_sqrt2(600, 1e-150), 30))
    series = mu_estimate(recs[1:])
    assert 1.95 < series.tail_min <= series.tail_max < 2.1
    assert series.running_max == sorted(series.running_max)


def test_bounded_quotients_mean_base_one():
    recs = cf_convergents(cf_expand(_sqrt2(), 30))
    series = beta_estimate(recs[1:])
    assert 0.99 < series.tail_max < 1.02


def test_equivalent_exponent_contract():
    assert equivalent_exponent(1.0, 0.0, 7) == pytest.approx(0.0)
    v = equivalent_exponent(2.0, 0.0, 16)
    assert v == pytest.approx(16 * math.log(2.0) / math.log(16.0))
    with pytest.raises(ValueError):
        equivalent_exponent(1.0, 0.0, 1)
    with pytest.raises(ValueError):
        equivalent_exponent(0.0, 0.0, 4)
