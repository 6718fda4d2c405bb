"""Iterated power towers and the reciprocal-sum number built from them.

The tower sequence is T_1 = 2 and T_{n+1} = 2^((n+1) * T_n).  The first few
values are 2, 16, 2^48, 2^(2^50); beyond that the exponents themselves stop
fitting in machine words and the values are kept symbolically.  TowerInt
represents coef * 2^exp exactly, where exp is either an int or another
TowerInt, so every comparison this module needs can be done on exponents
without ever rounding through a float.

The number of interest is the sum of reciprocals T = sum(1/T_k).  Its partial
sums s_n are exact rationals through n = 3 and are described in log space
after that.  verify_super_liouville(n, lam) decides, exactly, whether the
tail T - s_n is smaller than 1/lam^(T_n); the two-sided tail bracket

    1/T_{n+1} < T - s_n < 2/T_{n+1}

turns the question into integer exponent comparisons when lam is a power of
two, and into a directed-rounding log2 comparison with an explicit ambiguity
zone otherwise.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional, Union

import gmpy2

from .errors import AmbiguousBoundary, DepthCap, OverCap
from .precreal import ErrReal

TOWER_DEPTH_CAP = 6

# Exponent size (in bits) below which a tower exponent is kept as a plain int.
_MATERIALIZE_BITS = 64


@dataclass(frozen=True)
class TowerInt:
    """Exact positive integer of the form coef * 2^exp.

    coef is a positive int and exp is a nonnegative int or another TowerInt.
    When exp is an int the constructor folds factors of two out of coef, so
    equality on (coef, exp) is canonical in that case.  Nested exponents are
    compared structurally; the towers built here never produce two distinct
    structures with equal value.
    """

    coef: int
    exp: Union[int, "TowerInt"]

    def __post_init__(self):
        if not isinstance(self.coef, int) or self.coef < 1:
            raise ValueError("coef must be a positive int")
        if isinstance(self.exp, int):
            if self.exp < 0:
                raise ValueError("exp must be nonnegative")
            c, e = self.coef, self.exp
            while c % 2 == 0:
                c //= 2
                e += 1
            object.__setattr__(self, "coef", c)
            object.__setattr__(self, "exp", e)
        elif not isinstance(self.exp, TowerInt):
            raise ValueError("exp must be an int or a TowerInt")

    def to_int(self, max_bits: int = 1_000_000) -> int:
        """The exact integer value, or OverCap if it needs > max_bits bits."""
        if isinstance(self.exp, TowerInt):
            raise OverCap("exponent is itself a tower; value not materializable")
        if self.exp + self.coef.bit_length() > max_bits:
            raise OverCap(
                f"value needs about {self.exp + self.coef.bit_length()} bits, "
                f"cap is {max_bits}")
        return self.coef << self.exp

    def times(self, m: int) -> "TowerInt":
        """Exact product with a positive int."""
        if m < 1:
            raise ValueError("m must be a positive int")
        return TowerInt(self.coef * m, self.exp)

    def value_at_least(self, k: int) -> bool:
        """Exact test value >= k for a nonnegative int k.

        For nested exponents the test recurses through the (sufficient)
        bound value >= 2^exp; on the towers built here this is also
        necessary because coef stays far below the next doubling.
        """
        if k <= 1:
            return True
        if isinstance(self.exp, int):
            bl_v = self.exp + self.coef.bit_length()
            bl_k = k.bit_length()
            if bl_v != bl_k:
                return bl_v > bl_k
            return (self.coef << self.exp) >= k
        return self.exp.value_at_least(k.bit_length())

    def log2_at_least(self, k: int) -> bool:
        """Exact test log2(value) >= k for a nonnegative int k."""
        if isinstance(self.exp, int):
            return self.exp + self.coef.bit_length() - 1 >= k
        # log2 = exp + log2(coef) >= exp, and exp >= k suffices.
        return self.exp.value_at_least(k)

    def __eq__(self, other) -> bool:
        if isinstance(other, TowerInt):
            return self.coef == other.coef and self.exp == other.exp
        if isinstance(other, int):
            if other < 1:
                return False
            try:
                return self.to_int(max_bits=other.bit_length() + 8) == other
            except OverCap:
                return False
        return NotImplemented

    def __hash__(self):
        return hash((self.coef, self.exp if isinstance(self.exp, int)
                     else ("t", self.exp.coef, self.exp.exp)))

    def __repr__(self) -> str:
        e = self.exp
        estr = str(e) if isinstance(e, int) else f"({e!r})"
        if self.coef == 1:
            return f"2^{estr}"
        return f"{self.coef}*2^{estr}"


def tower_T(n: int) -> TowerInt:
    """The n-th tower T_n, exactly.  Depth is capped at 6."""
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > TOWER_DEPTH_CAP:
        raise DepthCap(f"tower depth {n} exceeds cap {TOWER_DEPTH_CAP}")
    t = TowerInt(1, 1)
    for k in range(2, n + 1):
        try:
            e = k * t.to_int(max_bits=_MATERIALIZE_BITS)
        except OverCap:
            e = t.times(k)
        t = TowerInt(1, e)
    return t


@dataclass(frozen=True)
class TailPartial:
    """Partial sum s_n for n >= 4, described in log space.

    The exact prefix covers k <= 3; the remaining tail sum(1/T_k, 4 <= k <= n)
    is pinned between 2^tail_log2_lo and 2^tail_log2_hi (inclusive bounds).
    """

    n: int
    prefix: Fraction
    tail_log2_lo: int
    tail_log2_hi: int


def tower_partial(n: int):
    """Partial sum s_n = sum(1/T_k, k <= n).

    Exact Fraction for n <= 3.  For 4 <= n <= 6 the denominator 2^(2^50)
    cannot be materialized, so the result is a TailPartial with the tail
    bracketed in log space.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > TOWER_DEPTH_CAP:
        raise DepthCap(f"tower depth {n} exceeds cap {TOWER_DEPTH_CAP}")
    if n <= 3:
        s = Fraction(0)
        for k in range(1, n + 1):
            s += Fraction(1, tower_T(k).to_int())
        return s
    prefix = tower_partial(3)
    # Tail terms beyond 1/T_4 add less than 1/T_4 combined, so the tail sits
    # in [1/T_4, 2/T_4); log2(T_4) = 2^50 exactly.
    lo = -(2 ** 50)
    hi = lo if n == 4 else lo + 1
    return TailPartial(n=n, prefix=prefix, tail_log2_lo=lo, tail_log2_hi=hi)


def _log2_interval(x: Fraction, bits: int = 256):
    """Certified [lo, hi] Fractions enclosing log2(x) for a rational x > 0."""
    down = gmpy2.context(precision=bits, round=gmpy2.RoundDown)
    up = gmpy2.context(precision=bits, round=gmpy2.RoundUp)
    num = gmpy2.mpz(x.numerator)
    den = gmpy2.mpz(x.denominator)
    lo = down.sub(down.log2(num), up.log2(den))
    hi = up.sub(up.log2(num), down.log2(den))
    return (Fraction(*lo.as_integer_ratio()), Fraction(*hi.as_integer_ratio()))


def verify_super_liouville(n: int, lam) -> bool:
    """Decide 0 < T - s_n < 1/lam^(T_n), exactly.

    lam may be an int, float, or Fraction, and must exceed 1.  When lam is a
    power of two 2^j the decision is pure integer arithmetic: True exactly
    when j <= n, False exactly when j >= n + 1.  Otherwise log2(lam) is
    enclosed with directed rounding and compared against the thresholds
    n + 1 - 1/T_n (True side) and n + 1 (False side); an enclosure straddling
    the gap between them raises AmbiguousBoundary.

    The left inequality 0 < T - s_n holds structurally: the tail is a sum of
    positive terms.
    """
    if n < 1:
        raise ValueError("n must be >= 1")
    if n > TOWER_DEPTH_CAP:
        raise DepthCap(f"tower depth {n} exceeds cap {TOWER_DEPTH_CAP}")
    lam_q = Fraction(lam)
    if lam_q <= 1:
        raise ValueError("lam must exceed 1")

    if lam_q.denominator == 1 and (lam_q.numerator & (lam_q.numerator - 1)) == 0:
        j = lam_q.numerator.bit_length() - 1
        # Tail < 2/T_{n+1} = 2^(1-(n+1)T_n) <= 2^(-j T_n) iff (n+1-j) T_n >= 1,
        # and T_n >= 2, so the test is just j <= n.  The False side compares
        # against the lower edge 1/T_{n+1} the same way.
        return j <= n

    lo, hi = _log2_interval(lam_q)
    t_n = tower_T(n)
    if n <= 3:
        thresh_true = Fraction(n + 1) - Fraction(1, t_n.to_int())
    else:
        # 1/T_n < 2^-300 here, far below the 256-bit enclosure resolution.
        if not t_n.log2_at_least(300):
            raise AmbiguousBoundary("tower too shallow for the coarse threshold")
        thresh_true = Fraction(n + 1) - Fraction(1, 2 ** 300)
    if hi <= thresh_true:
        return True
    if lo >= n + 1:
        return False
    raise AmbiguousBoundary(
        f"log2(lam) enclosure [{float(lo):.17g}, {float(hi):.17g}] straddles "
        f"the decision boundary at n + 1 = {n + 1}")


@dataclass(frozen=True)
class TowerRecord:
    """Approximation record for s_n = p/q with q = T_n.

    The error T - s_n lies in [1/err_scale, 2/err_scale] with
    err_scale = T_{n+1}.  p and err are materialized only while they fit
    (p through n = 3, err through n = 2); the four diagnostic floats follow
    the same lower-edge convention as the continued-fraction records, so
    these records feed mu_estimate and beta_estimate directly.  beta_k is
    2^(n+1) exactly; beta_exact_log2 carries that exponent as an int.
    """

    k: int
    q: TowerInt
    p: Optional[int]
    err: Optional[ErrReal]
    err_scale: TowerInt
    mu_k: float
    mu_tight: float
    beta_k: float
    beta_tight: float
    beta_exact_log2: int


def _enclosure_errreal(lo: Fraction, hi: Fraction) -> ErrReal:
    mid = (lo + hi) / 2
    half = (hi - lo) / 2
    out = ErrReal.from_fraction(mid, bits=64)
    return out.widen(float(half) * (1 + 1e-12))


def tower_records(n_max: int):
    """Records for the tower convergents s_n, n = 1..n_max (n_max <= 5).

    The cap is 5 because the record at n describes the tail against
    T_{n+1}, and T_6 is the deepest representable tower.
    """
    if n_max < 1:
        raise ValueError("n_max must be >= 1")
    if n_max > TOWER_DEPTH_CAP - 1:
        raise DepthCap(f"records need T_(n+1); n_max capped at {TOWER_DEPTH_CAP - 1}")
    records = []
    t_prev_val = 1  # T_0 = 1 makes the n = 1 diagnostics come out right
    for n in range(1, n_max + 1):
        t_n = tower_T(n)
        scale = tower_T(n + 1)
        # log2(T_n) = n * T_{n-1}; both mu forms are ratios of such products.
        try:
            t_val = t_n.to_int(max_bits=_MATERIALIZE_BITS)
            mu = (n + 1) * t_val / (n * t_prev_val)
            mu_tight = ((n + 1) * t_val - 1) / (n * t_prev_val)
            beta_tight = 2.0 ** ((n + 1) - 1.0 / t_val)
            t_prev_val = t_val
        except OverCap:
            mu = math.inf
            mu_tight = math.inf
            beta_tight = float(2 ** (n + 1))
            t_prev_val = None
        if n <= 3:
            s = tower_partial(n)
            p = s.numerator * (t_n.to_int() // s.denominator)
        else:
            p = None
        if n <= 2:
            inv = Fraction(1, scale.to_int())
            err = _enclosure_errreal(inv, 2 * inv)
        else:
            err = None
        records.append(TowerRecord(
            k=n, q=t_n, p=p, err=err, err_scale=scale,
            mu_k=mu, mu_tight=mu_tight,
            beta_k=float(2 ** (n + 1)), beta_tight=beta_tight,
            beta_exact_log2=n + 1))
    return records
