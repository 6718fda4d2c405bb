import math

import pytest

from eulerforms.bounds import (theorem_bounds, m_lambda_eps, mu_sigma_tau,
                               chudnovsky_hata_bound, PLATEAU,
                               LOG_4_OVER_E, LOG_2E)
from eulerforms.errors import BranchBoundary


def test_margin_zero_gives_two_e(oracles):
    assert theorem_bounds(0.0) == pytest.approx(oracles["two_e"], abs=1e-14)
    assert theorem_bounds(0.0) == 2.0 * math.e


def test_margin_domain():
    edge = 2 * LOG_4_OVER_E
    assert theorem_bounds(edge * (1 - 1e-12)) < 8.0
    for bad in (-1e-9, edge, edge + 0.5):
        with pytest.raises(ValueError):
            theorem_bounds(bad)


def test_decay_base(oracles):
    assert m_lambda_eps(8.0, 0.0) == pytest.approx(oracles["four_over_e"], abs=1e-14)
    assert m_lambda_eps(8.0, 0.0) == 4.0 / math.e
    # below lam = 8 the min switches to the lam/2 arm
    assert m_lambda_eps(4.0, 0.0) == pytest.approx(2.0 / math.e)
    assert m_lambda_eps(4.0, 1.0) == pytest.approx(2.0 / math.e ** 2)
    with pytest.raises(ValueError):
        m_lambda_eps(0.0, 0.0)
    with pytest.raises(ValueError):
        m_lambda_eps(2.0, -0.1)


def test_measure_branches(oracles):
    # steep-decay branch: tau above the threshold pins the plateau
    assert mu_sigma_tau(1.0, 0.9) == pytest.approx(oracles["branch2"], abs=1e-14)
    assert mu_sigma_tau(1.0, 0.9) == PLATEAU
    # shallow branch at (1, 1/2): 1 + 4 log(2e)
    assert mu_sigma_tau(1.0, 0.5) == pytest.approx(oracles["mu_1_05"], abs=1e-14)
    assert mu_sigma_tau(1.0, 0.5) == 1.0 + 4.0 * LOG_2E


def test_branches_meet_continuously(oracles):
    t = 2.0 * LOG_4_OVER_E  # threshold for sigma = 1
    below = mu_sigma_tau(1.0, t * (1 - 1e-13))
    above = mu_sigma_tau(1.0, t * (1 + 1e-13))
    assert abs(below - above) < 1e-11
    assert abs(below - PLATEAU) < 1e-11
    assert abs(oracles["branch2"] - oracles["branch1_at_limit"]) < 1e-14


def test_branch_boundary_is_loud():
    t = 2.0 * LOG_4_OVER_E
    with pytest.raises(BranchBoundary):
        mu_sigma_tau(1.0, t)


def test_comparison_bound():
    assert chudnovsky_hata_bound(1.0, 0.5) == 3.0
    assert chudnovsky_hata_bound(2.0, 2.0) == 2.0
    with pytest.raises(ValueError):
        chudnovsky_hata_bound(0.5, 1.0)
    with pytest.raises(ValueError):
        chudnovsky_hata_bound(1.0, 0.0)


def test_subsequence_growth_sits_inside_the_margin_domain(oracles):
    """The measured growth of log(q_n)/n at n = 40 keeps its deviation from
    2 log(2e) inside the domain where the margin formula applies."""
    dev = oracles["qk40_dev"]
    assert 0 <= 2 * dev < 2 * LOG_4_OVER_E
    assert theorem_bounds(2 * dev) < 8.0
    growth = oracles["qk40_growth"]
    assert abs(growth - 2 * LOG_2E) == pytest.approx(dev, abs=1e-14)
