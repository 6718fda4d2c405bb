"""Certified arbitrary-precision toolkit for a family of log-linear forms.

The package computes, with tracked error bounds throughout:

  * the integer sequence S(n) (windowed products of shifted integers with
    squared-binomial times scaled-harmonic exponents) and its log reduction
    F(n) = log distance-to-integer diagnostics, exactly in the exponents
  * the double integral I(n) whose linear form ties log S(n) to Euler's
    constant, evaluated by two independent methods that must agree
  * continued-fraction irrationality exponent and base diagnostics, plus two
    worked extremes: a power-tower reciprocal sum and a factorial continued
    fraction
  * closed-form conditional bound calculators linking growth exponents of
    the linear forms to irrationality measures

Everything numerical carries a certified absolute error (ErrReal); anything
that cannot be certified raises instead of guessing.
"""

from .errors import (
    EulerformsError, AmbiguousBoundary, AmbiguousQuotient, PrecisionExhausted,
    OverCap, DepthCap, SelfCheckFailed, MethodDisagreement,
    IntegralityFailure, IdentityMismatch, BranchBoundary, CheckpointMismatch)
from .exact import (
    PARSE_POLICY, lcm_upto, binomial, harmonic_window, SnFactor,
    triple_count, sn_factor_stream, grouped_exponents,
    log_sn_digits_estimate, sn_exact_small)
from .precreal import (
    ErrReal, big_sum, log_of_int, certified_floor, certified_frac,
    certified_dist, float_approx_up, float_approx_down)
from .constants import ConstRequest, const_value, gamma
from .logseq import (
    FRecord, SkipRecord, error_floor, log_sn_reduced, f_of_n, f_series,
    f_series_rendered, render_frecord, working_digits)
from .integral import integral_In
from .relations import (
    RelationReport, relation_check, criterion_gap, MonitorRecord,
    asymptotic_monitor, ScanCandidate, ScanReport, subsequence_scan,
    LinearFormRecord, linear_form_sequence)
from .cf import (
    ConvergentRecord, cf_expand, cf_convergents, EstimateSeries,
    mu_estimate, beta_estimate, equivalent_exponent)
from .towers import (
    TowerInt, TowerRecord, TailPartial, tower_T, tower_partial,
    verify_super_liouville, tower_records)
from .factcf import (
    L_convergents, L_value, verify_L_chain, first_chain_n, digit_count)
from .bounds import (
    theorem_bounds, m_lambda_eps, mu_sigma_tau, chudnovsky_hata_bound)

__version__ = "0.1.0"

__all__ = [
    "EulerformsError", "AmbiguousBoundary", "AmbiguousQuotient",
    "PrecisionExhausted", "OverCap", "DepthCap", "SelfCheckFailed",
    "MethodDisagreement", "IntegralityFailure", "IdentityMismatch",
    "BranchBoundary", "CheckpointMismatch",
    "PARSE_POLICY", "lcm_upto", "binomial", "harmonic_window", "SnFactor",
    "triple_count", "sn_factor_stream", "grouped_exponents",
    "log_sn_digits_estimate", "sn_exact_small",
    "ErrReal", "big_sum", "log_of_int", "certified_floor", "certified_frac",
    "certified_dist", "float_approx_up", "float_approx_down",
    "ConstRequest", "const_value", "gamma",
    "FRecord", "SkipRecord", "error_floor", "log_sn_reduced", "f_of_n",
    "f_series", "f_series_rendered", "render_frecord", "working_digits",
    "integral_In",
    "RelationReport", "relation_check", "criterion_gap", "MonitorRecord",
    "asymptotic_monitor", "ScanCandidate", "ScanReport", "subsequence_scan",
    "LinearFormRecord", "linear_form_sequence",
    "ConvergentRecord", "cf_expand", "cf_convergents", "EstimateSeries",
    "mu_estimate", "beta_estimate", "equivalent_exponent",
    "TowerInt", "TowerRecord", "TailPartial", "tower_T", "tower_partial",
    "verify_super_liouville", "tower_records",
    "L_convergents", "L_value", "verify_L_chain", "first_chain_n",
    "digit_count",
    "theorem_bounds", "m_lambda_eps", "mu_sigma_tau", "chudnovsky_hata_bound",
    "__version__",
]
