"""The factorial continued fraction [0; 10^(1!), 10^(2!), 10^(3!), ...].

Its value L is approximated by the convergents p_k/q_k of the recurrence
q_k = 10^(k!) q_{k-1} + q_{k-2}, q_0 = 1, q_1 = 10.  The denominators grow
doubly fast (10^(k!) < q_k < 10^(2 k!) for k >= 2), which makes L a Liouville
number, yet the growth is so regular that the base diagnostics collapse to 1.

L is always evaluated through its convergents, never from a decimal literal:
the tail truncation is bounded by 1/(q_k q_{k+1}), and every inequality in
verify_L_chain is carried out in exact integer arithmetic (via gmpy2, since
the deeper denominators run to tens of millions of digits) or with directed
rounding plus an explicit ambiguity zone.

Error enclosures for the records use the two-sided bracket

    1/(q_k q_{k+2}) < |L - p_k/q_k| < 1/(q_k q_{k+1}),

whose lower edge is what the exponent diagnostics mu_k are defined against.
"""

from __future__ import annotations

import math
from fractions import Fraction
from typing import Optional

import gmpy2

from .errors import AmbiguousBoundary, DepthCap, SelfCheckFailed
from .precreal import ErrReal
from .cf import ConvergentRecord, _diagnostics, _enclosure_to_errreal

L_DEPTH_CAP = 6


def _quotient(k: int) -> int:
    """Partial quotient a_k = 10^(k!) for k >= 1 (a_0 = 0)."""
    return 0 if k == 0 else 10 ** math.factorial(k)


def _mpz_convergents(k_max: int):
    """(p, q) lists as gmpy2.mpz through index k_max."""
    ten = gmpy2.mpz(10)
    p = [gmpy2.mpz(0), gmpy2.mpz(1)]
    q = [gmpy2.mpz(1), ten]
    for k in range(2, k_max + 1):
        a = ten ** math.factorial(k)
        p.append(a * p[k - 1] + p[k - 2])
        q.append(a * q[k - 1] + q[k - 2])
    return p, q


def digit_count(x) -> int:
    """Exact decimal digit count of a nonnegative integer.

    Goes through gmpy2's digit renderer: CPython refuses str() on very large
    ints by default, and GMP is much faster anyway.
    """
    return len(gmpy2.mpz(x).digits(10))


def L_convergents(n_max: int) -> list[ConvergentRecord]:
    """Records for the convergents p_k/q_k, k = 0..n_max (n_max <= 6).

    Quotients are taken two levels past n_max so every record gets the
    two-sided error bracket.  The growth bound 10^(k!) < q_k < 10^(2 k!)
    is checked exactly for every k >= 2 encountered; a violation would mean
    corrupted arithmetic and raises SelfCheckFailed.
    """
    if n_max < 0:
        raise ValueError("n_max must be >= 0")
    if n_max > L_DEPTH_CAP:
        raise DepthCap(f"convergent depth {n_max} exceeds cap {L_DEPTH_CAP}")
    p, q = _mpz_convergents(n_max + 2)
    for k in range(2, n_max + 3):
        fact = math.factorial(k)
        ten = gmpy2.mpz(10)
        if not (ten ** fact < q[k] < ten ** (2 * fact)):
            raise SelfCheckFailed(f"growth bound violated at k={k}")
    for k in range(1, n_max + 3):
        det = p[k] * q[k - 1] - p[k - 1] * q[k]
        if det != (1 if k % 2 else -1):
            raise SelfCheckFailed(f"determinant identity violated at k={k}")
    records = []
    for k in range(0, n_max + 1):
        qk = int(q[k])
        err_lo = Fraction(1, qk * int(q[k + 2]))
        err_hi = Fraction(1, qk * int(q[k + 1]))
        mu, mu_tight, beta, beta_tight = _diagnostics(qk, err_lo, err_hi)
        records.append(ConvergentRecord(
            k=k, a_k=_quotient(k), p_k=int(p[k]), q_k=qk,
            err=_enclosure_to_errreal(err_lo, err_hi),
            err_lo=err_lo, err_hi=err_hi,
            mu_k=mu, mu_tight=mu_tight, beta_k=beta, beta_tight=beta_tight))
    return records


def L_value(target_abs_err: float = 1e-30) -> ErrReal:
    """L itself, certified to the requested absolute error.

    Walks down the convergents until the tail bound 1/(q_k q_{k+1}) is below
    target, then returns that convergent as an ErrReal.  The doubly fast
    growth means a handful of levels suffice for any sane target.
    """
    if not 0 < target_abs_err < 1:
        raise ValueError("target_abs_err must be in (0, 1)")
    for k in range(2, L_DEPTH_CAP + 3):
        p, q = _mpz_convergents(k + 1)
        tail = Fraction(1, int(q[k]) * int(q[k + 1]))
        if tail < Fraction(target_abs_err):
            bits = int(-math.log2(target_abs_err)) + 32
            approx = ErrReal.from_fraction(Fraction(int(p[k]), int(q[k])), bits)
            return approx.widen(float(tail) * (1 + 1e-12) + 5e-324)
    raise DepthCap("target below the reach of the depth cap")


def verify_L_chain(n: int, eps) -> bool:
    """Decide whether |L - p_n/q_n| > (1 + eps)^(-q_n) closes at level n.

    The chain has three links, each certified on its own:

      1. |L - p_n/q_n| > 1/(q_n q_{n+2}), using the truncation p_N/q_N with
         N = n + 4 and its own tail slack, as one exact cross-multiplied
         integer comparison.
      2. q_n q_{n+2} < 10^(2 (n! + (n+2)!)), exact integer comparison.
      3. (1 + eps)^(10^(n!)) > 10^(2 (n! + (n+2)!)), decided in log space
         with directed rounding at 128 bits.

    Together the links give (1 + eps)^(-q_n) < 1/(q_n q_{n+2}) < |L - p_n/q_n|.
    Returns False when link 3 fails cleanly in the other direction (the
    chain does not close at this n); raises AmbiguousBoundary only if the
    directed-rounding enclosures in link 3 overlap, which does not happen
    away from hand-crafted boundary inputs.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > L_DEPTH_CAP:
        raise DepthCap(f"chain level {n} exceeds cap {L_DEPTH_CAP}")
    eps_q = Fraction(eps)
    if eps_q <= 0:
        raise ValueError("eps must be positive")

    big_n = n + 4
    p, q = _mpz_convergents(big_n + 1)

    # Link 1: |D| q_{N+1} q_{n+2} - q_n q_{n+2} > q_N q_{N+1}, which is the
    # cross-multiplied form of |p_N/q_N - p_n/q_n| - 1/(q_N q_{N+1})
    # exceeding 1/(q_n q_{n+2}).
    d = abs(p[big_n] * q[n] - p[n] * q[big_n])
    lhs = d * q[big_n + 1] * q[n + 2] - q[n] * q[n + 2]
    rhs = q[big_n] * q[big_n + 1]
    if not lhs > rhs:
        raise SelfCheckFailed(f"truncation slack swallowed link 1 at n={n}")

    # Link 2, exact.
    bound_exp = 2 * (math.factorial(n) + math.factorial(n + 2))
    if not q[n] * q[n + 2] < gmpy2.mpz(10) ** bound_exp:
        raise SelfCheckFailed(f"growth bound violated in link 2 at n={n}")

    # Link 3, directed rounding: 10^(n!) * ln(1 + eps)  vs  bound_exp * ln(10).
    down = gmpy2.context(precision=128, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=128, round=gmpy2.RoundUp)
    num = gmpy2.mpz((1 + eps_q).numerator)
    den = gmpy2.mpz((1 + eps_q).denominator)
    ln1e_lo = down.sub(down.log(num), up.log(den))
    ln1e_hi = up.sub(up.log(num), down.log(den))
    scale = gmpy2.mpz(10) ** math.factorial(n)
    lhs_lo = down.mul(gmpy2.mpfr(scale, precision=128), ln1e_lo)
    lhs_hi = up.mul(gmpy2.mpfr(scale, precision=128), ln1e_hi)
    rhs_lo = down.mul(gmpy2.mpfr(bound_exp, precision=128), down.log(gmpy2.mpz(10)))
    rhs_hi = up.mul(gmpy2.mpfr(bound_exp, precision=128), up.log(gmpy2.mpz(10)))
    if lhs_lo > rhs_hi:
        return True
    if lhs_hi < rhs_lo:
        return False
    raise AmbiguousBoundary(
        f"link 3 enclosures overlap at n={n}; eps sits on the boundary")


def first_chain_n(eps, n_hi: int = L_DEPTH_CAP) -> Optional[int]:
    """Smallest n <= n_hi where verify_L_chain closes, or None."""
    for n in range(1, n_hi + 1):
        if verify_L_chain(n, eps):
            return n
    return None
