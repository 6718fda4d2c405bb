"""Exact big-integer and rational combinatorics.

This module is the only place that knows the factor structure of the integer
sequence S(n) whose logarithm feeds the downstream linear forms. Everything
here is exact: Python ints, Fractions, no floats.

The factor stream parse
-----------------------
S(n) is a triple product over indices (m, k, j) with

    m in 1..n,   k in 0..min(m-1, n-m),   j in k+1..n-k,

each factor being (n+m) raised to C(n,k)^2 * 2*d(2n)/j, where d(N) is
lcm(1..N). The exponent is an exact positive integer because j <= 2n divides
d(2n). This reading of the product (coefficient in the exponent, not in the
base) is pinned by regression tests: it is the unique parse that keeps the
downstream integer-combination identity exact.

Grouping: summing the exponents for fixed m gives

    G_m = 2 * sum_{k=0}^{min(m-1,n-m)} C(n,k)^2 * W(k, n),
    W(k, n) = sum_{j=k+1}^{n-k} d(2n)//j,

so log S(n) = sum_m G_m * log(n+m) needs only n log evaluations instead of
O(n^3). ``harmonic_window`` exposes the rational analogue H_{n-k} - H_k used
by the grouped form and by the test suite's cross-checks.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator

from .errors import OverCap

#: Identifier for the product parse implemented here. Embedded in output
#: headers because alternative readings of the product exist; see README.
PARSE_POLICY = "expwindow-v1"


def lcm_upto(n: int) -> int:
    """lcm(1, 2, ..., n). lcm_upto(1) == 1."""
    if n < 1:
        raise ValueError("n must be >= 1")
    return math.lcm(*range(1, n + 1))


def binomial(n: int, k: int) -> int:
    if k < 0 or k > n:
        raise ValueError("need 0 <= k <= n")
    return math.comb(n, k)


def harmonic_window(k: int, n: int) -> Fraction:
    """H_{n-k} - H_k = sum of 1/j for j in k+1..n-k, as an exact Fraction.

    Empty window (k >= n-k) gives 0.
    """
    if k < 0 or k > n:
        raise ValueError("need 0 <= k <= n")
    total = Fraction(0)
    for j in range(k + 1, n - k + 1):
        total += Fraction(1, j)
    return total


@dataclass(frozen=True)
class SnFactor:
    """One factor base**exponent of S(n), at triple index (m, k, j)."""

    m: int
    k: int
    j: int
    base: int
    exponent: int

    def __post_init__(self) -> None:
        if self.base < 2 or self.exponent <= 0:
            raise ValueError("factor must satisfy base >= 2, exponent > 0")


def triple_count(n: int) -> int:
    """Number of (m, k, j) triples for a given n, counted independently of
    the stream itself (used as a cross-check)."""
    return sum(
        max(0, n - 2 * k)
        for m in range(1, n + 1)
        for k in range(0, min(m - 1, n - m) + 1)
    )


def sn_factor_stream(n: int) -> Iterator[SnFactor]:
    """Yield the factors of S(n) in lexicographic (m, k, j) order.

    The emission order is part of the contract: downstream summation and any
    parallel partitioning rely on it being deterministic.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    d2n = lcm_upto(2 * n)
    for m in range(1, n + 1):
        for k in range(0, min(m - 1, n - m) + 1):
            c2 = math.comb(n, k) ** 2
            for j in range(k + 1, n - k + 1):
                q, r = divmod(2 * d2n, j)
                if r:  # j <= 2n always divides d(2n); guard the invariant
                    raise AssertionError("d(2n) divisibility broken")
                yield SnFactor(m=m, k=k, j=j, base=n + m, exponent=c2 * q)


def grouped_exponents(n: int) -> list[int]:
    """[G_1, ..., G_n] with log S(n) = sum G_m * log(n+m).

    Exact integers; the grouped form of the factor stream. G_m depends on m
    only through min(m-1, n-m), so prefix sums make this O(n^2) divisions.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    d2n = lcm_upto(2 * n)
    kmax = (n - 1) // 2
    window = [sum(d2n // j for j in range(k + 1, n - k + 1)) for k in range(kmax + 1)]
    prefix = []
    acc = 0
    for k in range(kmax + 1):
        acc += math.comb(n, k) ** 2 * window[k]
        prefix.append(acc)
    return [2 * prefix[min(m - 1, n - m)] for m in range(1, n + 1)]


def log_sn_digits_estimate(n: int) -> float:
    """Rough decimal digit count of S(n) (not of log S(n)), float precision.

    Uses the grouped exponents with float logs; good to a few ulps, which is
    plenty for cap checks.
    """
    total = 0.0
    for m, g in enumerate(grouped_exponents(n), start=1):
        total += g * math.log10(n + m)
    return total


def sn_exact_small(n: int, cap_digits: int) -> int:
    """The exact integer S(n), provided its digit count fits under cap_digits.

    Raises OverCap otherwise. S(n) grows doubly exponentially, so this is
    only usable for tiny n; it exists to make "S(n) is a positive integer"
    directly testable.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if cap_digits < 1:
        raise ValueError("cap_digits must be >= 1")
    est = log_sn_digits_estimate(n)
    if est > cap_digits:
        raise OverCap(
            f"S({n}) has about {est:.4g} digits, over the cap of {cap_digits}"
        )
    value = 1
    for m, g in enumerate(grouped_exponents(n), start=1):
        value *= (n + m) ** g
    return value
