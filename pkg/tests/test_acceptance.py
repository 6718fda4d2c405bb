"""Acceptance gate: the nine release criteria, one test each.

Run `pytest -v tests/test_acceptance.py` to get exactly one pass/fail line
per criterion. Every tolerance here is part of the release contract; do not
loosen any of them to make a failure go away.
"""

import math
from fractions import Fraction

import gmpy2
import mpmath
import pytest

from eulerforms.bounds import (theorem_bounds, mu_sigma_tau, m_lambda_eps,
                               LOG_4_OVER_E, PLATEAU)
from eulerforms.cf import cf_convergents, cf_expand, mu_estimate, beta_estimate
from eulerforms.constants import gamma
from eulerforms.errors import BranchBoundary
from eulerforms.exact import lcm_upto, binomial, sn_factor_stream
from eulerforms.factcf import L_convergents
from eulerforms.integral import integral_In
from eulerforms.logseq import f_series_rendered, log_sn_value
from eulerforms.relations import relation_check, asymptotic_monitor
from eulerforms.towers import tower_records, verify_super_liouville
from eulerforms.precreal import ErrReal


def test_criterion_1_series_anchors(fseries200):
    """F(1) = -1.480 +- 0.005 and F(5) = -0.667 +- 0.005."""
    f = {r["n"]: float(r["F"]) for r in fseries200 if r["status"] == "ok"}
    assert abs(f[1] - (-1.480)) <= 0.005
    assert abs(f[5] - (-0.667)) <= 0.005


def test_criterion_2_minimum_structure(fseries200):
    """Over 2 <= n <= 200 the minimum of F sits at n = 5, none below -0.675."""
    tail = [(float(r["F"]), r["n"]) for r in fseries200 if r["n"] >= 2]
    assert all(r["status"] == "ok" for r in fseries200)
    best_f, best_n = min(tail)
    assert best_n == 5
    assert all(v > -0.675 for v, _ in tail)


def test_criterion_3_integer_reconstruction():
    """For 1 <= n <= 40 the combination d(2n)C(2n,n)gamma + log S(n)
    - d(2n)I(n) lands within 1e-20 of an integer, with the integral's two
    independent evaluators agreeing to 1e-30."""
    for n in range(1, 41):
        val = integral_In(n, target_abs_err=1e-30)
        assert val.abs_err <= 1e-30
        rep = relation_check(n, tolerance=1e-20)
        certified = abs(float(rep.residual.value)) + rep.residual.abs_err
        assert certified <= 1e-20, f"n={n}: residual {certified:.3g}"


def test_criterion_4_strict_bounds():
    """0 < I(n) < 4^(-2n) for n <= 40; C(2n,n) < 2^(2n) and
    d(n) <= e^(1.03883 n) for n <= 500."""
    for n in range(1, 41):
        v = integral_In(n)
        num, den = v.value.as_integer_ratio()
        x = Fraction(int(num), int(den))
        e = Fraction(v.abs_err)
        assert x - e > 0
        assert x + e < Fraction(4) ** (-2 * n)
    for n in range(1, 501):
        assert binomial(2 * n, n) < 1 << (2 * n)
    d = 1
    worst = (0.0, 0)
    for n in range(1, 501):
        d = math.lcm(d, n)
        # round the left side up: ln(d) at 128 bits, then one ulp out
        with gmpy2.context(precision=128, round=gmpy2.RoundUp):
            ln_d = float(gmpy2.log(gmpy2.mpfr(d)))
        ratio = ln_d / n
        if ratio > worst[0]:
            worst = (ratio, n)
        assert ln_d <= 1.03883 * n, f"n={n}"
    assert worst[1] == 113  # the empirical maximum of log(d(n))/n


def test_criterion_5_decay_trend():
    """|(1/n) log(d(2n) I(n)) + 2 log(4/e)| at n = 40 is below the n = 10
    value and below 0.2."""
    ref = 2.0 * LOG_4_OVER_E
    dev = {}
    for n in (10, 40):
        rec = asymptotic_monitor(n)
        dev[n] = abs(float(rec.log_dIn_over_n.value) + ref)
    assert dev[40] < dev[10]
    assert dev[40] < 0.2


def test_criterion_6_tower_verifier():
    """The tower inequality holds at (n=2, lam=4) and (n=3, lam=8) by exact
    integer arithmetic, and beta at s_2, s_3 is 8 and 16 exactly."""
    assert verify_super_liouville(2, 4) is True
    assert verify_super_liouville(3, 8) is True
    recs = {r.k: r for r in tower_records(3)}
    assert recs[2].beta_k == 8.0 and recs[2].beta_exact_log2 == 3
    assert recs[3].beta_k == 16.0 and recs[3].beta_exact_log2 == 4


def test_criterion_7_factorial_cf_verifier():
    """q_2 = 1001; 10^(n!) < q_n < 10^(2 n!) for 2 <= n <= 5; the exponent
    estimate reaches 20 by k = 4 while the base at k = 3 stays under
    1.000001."""
    recs = L_convergents(5)
    by_k = {r.k: r for r in recs}
    assert by_k[2].q_k == 1001
    for n in range(2, 6):
        f = math.factorial(n)
        q = by_k[n].q_k
        assert 10 ** f < q < 10 ** (2 * f)
    mus = mu_estimate(recs[1:])
    running = dict(zip([k for k, _ in mus.values], mus.running_max))
    assert running[4] >= 20.0
    betas = dict(beta_estimate(recs[1:]).values)
    assert betas[3] < 1.000001


def test_criterion_8_bound_calculators():
    """theorem_bounds(0) = 2e = 5.43656...; the saturated branch of
    mu_sigma_tau equals log(8)/(log(4) - 1) = 5.383...; the branches meet
    to 1e-12; m_lambda_eps(8, 0) = 4/e."""
    t0 = theorem_bounds(0.0)
    assert format(t0, ".5f").startswith("5.43656")
    assert abs(t0 - 2.0 * math.e) < 1e-14
    sat = mu_sigma_tau(1.0, 0.9)
    assert sat == PLATEAU
    assert abs(sat - math.log(8.0) / (math.log(4.0) - 1.0)) < 1e-14
    assert format(sat, ".3f") == "5.383"
    thr = 2.0 * LOG_4_OVER_E
    below = mu_sigma_tau(1.0, thr * (1 - 1e-13))
    above = mu_sigma_tau(1.0, thr * (1 + 1e-13))
    assert abs(below - above) < 1e-12
    with pytest.raises(BranchBoundary):
        mu_sigma_tau(1.0, thr)
    assert abs(m_lambda_eps(8.0, 0.0) - 4.0 / math.e) < 1e-15


def test_criterion_9_property_suites(tmp_path):
    """ErrReal interval containment over 10^4 random expressions with
    precision doubling; convergent determinants +-1; grouped-vs-naive
    log S(n) agreement for n <= 30; byte-identical reruns and
    checkpoint-resume equivalence."""
    # 9a: the bulk soundness sweep (shared with the unit suite)
    import test_precreal
    test_precreal.test_soundness_bulk_random_expressions()

    # 9b: determinants of consecutive convergents
    expansions = [
        cf_expand(Fraction(13, 4), 10),
        cf_expand(gamma(60), 10),
        [q for q in (1, 2, 2, 2, 2, 2, 2, 2)],
    ]
    rec_lists = [cf_convergents(q) for q in expansions]
    rec_lists.append(L_convergents(4))
    for recs in rec_lists:
        for prev, cur in zip(recs, recs[1:]):
            assert cur.p_k * prev.q_k - prev.p_k * cur.q_k in (1, -1)

    # 9c: grouped reduction vs naive factor-by-factor sum
    mpmath.mp.dps = 60
    for n in range(1, 31):
        grouped = log_sn_value(n, 256)
        naive = mpmath.fsum(f.exponent * mpmath.ln(n + f.m)
                            for f in sn_factor_stream(n))
        diff = abs(float(mpmath.mpf(format(grouped.value, ".50g")) - naive))
        assert diff <= grouped.abs_err + float(naive) * 1e-45, f"n={n}"

    # 9d: byte-identical reruns and checkpoint resume, at the CLI layer
    import test_cli
    a = test_cli._run(["f-series", "--hi", "10", "--digits", "12"])
    b = test_cli._run(["f-series", "--hi", "10", "--digits", "12"])
    assert a == b
    ck = str(tmp_path / "resume.ckpt")
    test_cli._run(["f-series", "--hi", "6", "--digits", "12",
                   "--checkpoint", ck])
    resumed = test_cli._run(["f-series", "--hi", "10", "--digits", "12",
                             "--checkpoint", ck])
    assert resumed == a
