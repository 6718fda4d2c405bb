import math
from fractions import Fraction

import pytest

from eulerforms.relations import (relation_check, criterion_gap,
                                  asymptotic_monitor, subsequence_scan,
                                  linear_form_sequence)
from eulerforms.exact import lcm_upto


def test_integer_candidates_match_oracle(oracles):
    for n_str, want in oracles["dA"].items():
        n = int(n_str)
        if n > 10:
            continue
        rep = relation_check(n)
        assert rep.nearest_int == want
        assert rep.residual.abs_err < rep.tolerance
        assert abs(float(rep.residual.value)) < rep.tolerance
        assert rep.d2n == lcm_upto(2 * n)


def test_gap_values(oracles):
    for n_str, want in oracles["gaps"].items():
        gap = criterion_gap(int(n_str))
        assert math.isclose(float(gap.value), want, abs_tol=2e-14)
        assert gap.abs_err < 1e-14


@pytest.mark.parametrize("n,key", [(10, "monitor10"), (40, "monitor40")])
def test_monitor_values(oracles, n, key):
    rec = asymptotic_monitor(n)
    got = [float(rec.log_dn_over_n.value), float(rec.log_binom_over_2n.value),
           float(rec.log_In_over_n.value), float(rec.log_dIn_over_n.value)]
    for g, w in zip(got, oracles[key]):
        assert math.isclose(g, w, abs_tol=2e-13)


def test_monitor_without_integral():
    rec = asymptotic_monitor(25, with_integral=False)
    assert rec.log_In_over_n is None and rec.log_dIn_over_n is None
    assert 0.8 < float(rec.log_dn_over_n.value) < 1.1


def test_deviation_trend(oracles):
    """|(1/n) log(d(2n) I(n)) + 2 log(4/e)| shrinks from n=10 to n=40."""
    ref = 2.0 * (math.log(4.0) - 1.0)
    devs = {}
    for n in (10, 40):
        rec = asymptotic_monitor(n)
        devs[n] = abs(float(rec.log_dIn_over_n.value) + ref)
    assert math.isclose(devs[10], oracles["dev10"], abs_tol=1e-12)
    assert math.isclose(devs[40], oracles["dev40"], abs_tol=1e-12)
    assert devs[40] < devs[10] < 0.5


def test_scan_candidates():
    rep = subsequence_scan(60, 0, 1, 0.02)
    hits = [c.n for c in rep.frac_candidates]
    assert hits == [18, 44, 58]
    for c in rep.frac_candidates:
        assert abs(c.gap) <= 0.02 + c.gap_abs_err
    empty = subsequence_scan(25, 0, 1, 0.0)
    assert empty.frac_candidates == []
    assert empty.sigma_fit is None


def test_scan_dist_track_is_superset_of_frac_track():
    rep = subsequence_scan(60, 0, 1, 0.07)
    frac_ns = {c.n for c in rep.frac_candidates}
    dist_ns = {c.n for c in rep.dist_candidates}
    assert frac_ns <= dist_ns
    assert {18, 44, 58} <= frac_ns


def test_linear_form_dual_residuals_agree():
    recs = linear_form_sequence(range(1, 11), 0, 1)
    for rec in recs:
        delta = abs(float(rec.residual.value) - float(rec.residual_identity.value))
        assert delta <= rec.residual.abs_err + rec.residual_identity.abs_err + 1e-25
        assert rec.q > 0
        # with a=0, b=1 the ceiling variant is exactly one notch below
        assert rec.p_ceil == rec.p_floor - 1


def test_linear_form_residual_scale():
    """The residual of the n-th form tracks d(2n) I(n), so it decays fast."""
    recs = linear_form_sequence([4, 8], 0, 1)
    r4 = abs(float(recs[0].residual.value))
    r8 = abs(float(recs[1].residual.value))
    assert r8 < r4 < 1.0
