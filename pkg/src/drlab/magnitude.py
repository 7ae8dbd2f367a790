"""Certified magnitudes for positive integers too large to write down.

Deep levels of the growth schedule produce sizes like C(3k, k) where k is
itself a number with 10^140 digits.  Exact integers stop being storable, and
one level later even log2 of the value stops being storable.  A Magnitude
carries either the exact integer (tier 0) or, at tier t >= 1, a rational
interval that certifiably contains log2 applied t times to the value.

All interval rules are one-sided safe: the true value is always inside the
interval.  Comparisons either resolve with a certified strict order, resolve
exactly (both operands tier 0), or raise UnknownOrder; they never return a
wrong strict order.
"""

from __future__ import annotations

import math
from fractions import Fraction

__all__ = ["Magnitude", "UnknownOrder"]

# Slack added by "tight" interval rules.  Valid only under the size guards
# checked at each use site; otherwise the conservative +-1 rules apply.
_EPS = Fraction(1, 10**6)

# Exact integers above this bit size are demoted to tier-1 intervals.
_MAX_EXACT_BITS = 4_000_000

# Exact-binomial cap for C(3k, k).
_MAX_EXACT_BINOM_K = 50_000


class UnknownOrder(Exception):
    """Raised when interval bounds cannot certify a strict order."""


def _log2_int_bounds(n: int) -> tuple[Fraction, Fraction]:
    """Certified [lo, hi] containing log2(n) for a positive int."""
    if n <= 0:
        raise ValueError("log2 bounds need a positive integer")
    if n == 1:
        return Fraction(0), Fraction(0)
    length = n.bit_length()
    if length <= 53:
        x = Fraction(math.log2(n))
        slack = Fraction(1, 10**9)
        return x - slack, x + slack
    shift = length - 53
    top = n >> shift
    lo = Fraction(math.log2(top)) - Fraction(1, 10**9) + shift
    hi = Fraction(math.log2(top + 1)) + Fraction(1, 10**9) + shift
    return lo, hi


def _log2_fraction_bounds(x: Fraction) -> tuple[Fraction, Fraction]:
    """Certified [lo, hi] containing log2(x) for a positive Fraction."""
    if x <= 0:
        raise ValueError("log2 bounds need a positive value")
    plo, phi = _log2_int_bounds(x.numerator)
    qlo, qhi = _log2_int_bounds(x.denominator)
    return plo - qhi, phi - qlo


# Certified bounds on log2(27/4) = 3*log2(3) - 2 and on log2(log2(27/4)).
_L3_LO, _L3_HI = _log2_int_bounds(3)
_A_LO = 3 * _L3_LO - 2
_A_HI = 3 * _L3_HI - 2
_LA_LO, _LA_HI = _log2_fraction_bounds(_A_LO)[0], _log2_fraction_bounds(_A_HI)[1]


class Magnitude:
    """A certified positive integer magnitude, possibly astronomically large.

    tier 0: ``value`` holds the exact integer.
    tier t >= 1: ``lo``/``hi`` bound log2 iterated t times over the value.
    """

    __slots__ = ("tier", "value", "lo", "hi")

    def __init__(self, tier: int, value: int | None, lo: Fraction | None, hi: Fraction | None):
        self.tier = tier
        self.value = value
        self.lo = lo
        self.hi = hi
        if tier == 0:
            if value is None or value < 0:
                raise ValueError("tier-0 magnitude needs a nonnegative integer")
        else:
            if lo is None or hi is None or lo > hi:
                raise ValueError("bad magnitude interval")

    # -- constructors ----------------------------------------------------

    @staticmethod
    def from_int(n: int) -> "Magnitude":
        if n < 0:
            raise ValueError("magnitudes are nonnegative")
        if n.bit_length() > _MAX_EXACT_BITS:
            lo, hi = _log2_int_bounds(n)
            return Magnitude(1, None, lo, hi)
        return Magnitude(0, n, None, None)

    @staticmethod
    def interval(tier: int, lo: Fraction, hi: Fraction) -> "Magnitude":
        return Magnitude(tier, None, Fraction(lo), Fraction(hi))

    # -- representation helpers ------------------------------------------

    def is_exact(self) -> bool:
        return self.tier == 0

    def exact(self) -> int:
        if self.tier != 0:
            raise UnknownOrder("magnitude is not exactly representable")
        return self.value  # type: ignore[return-value]

    def promote(self) -> "Magnitude":
        """Return the same magnitude one tier up (one more log2)."""
        if self.tier == 0:
            if self.value == 0:
                raise UnknownOrder("cannot take log2 of zero")
            lo, hi = _log2_int_bounds(self.value)  # type: ignore[arg-type]
            return Magnitude(1, None, lo, hi)
        if self.lo <= 0:  # type: ignore[operator]
            # log2^(t)(x) <= 0 means the next log is undefined or negative;
            # our magnitudes are >= 2 at every tier in practice.
            raise UnknownOrder("cannot promote a magnitude with nonpositive bound")
        lo, _ = _log2_fraction_bounds(self.lo)  # type: ignore[arg-type]
        _, hi = _log2_fraction_bounds(self.hi)  # type: ignore[arg-type]
        return Magnitude(self.tier + 1, None, lo, hi)

    def _at_tier(self, t: int) -> "Magnitude":
        m = self
        while m.tier < t:
            m = m.promote()
        return m

    def _upper_payload(self, t: int) -> Fraction:
        """A certified upper bound on log2 iterated t times over the value.

        Always succeeds (floors at 0 once the iterated log drops below 1),
        unlike full promotion which needs two-sided bounds.
        """
        if self.tier == 0:
            hi = _log2_int_bounds(self.value)[1] if self.value else Fraction(0)  # type: ignore[arg-type]
            tier = 1
        else:
            hi = self.hi
            tier = self.tier
        while tier < t:
            hi = _log2_fraction_bounds(hi)[1] if hi > 1 else Fraction(0)
            tier += 1
        return hi  # type: ignore[return-value]

    def _pseudo_at_tier(self, t: int) -> "Magnitude":
        """Tier-t view usable as a combination operand.

        The lower bound may be a meaningless sentinel; callers rely only on
        the fact that products and sums are at least as large as the other
        operand, so the max() in the combination rules discards it.
        """
        try:
            return self._at_tier(t)
        except UnknownOrder:
            return Magnitude(t, None, Fraction(-(10**9)), self._upper_payload(t))

    # -- arithmetic --------------------------------------------------------

    def mul(self, other: "Magnitude") -> "Magnitude":
        if self.tier == 0 and other.tier == 0:
            prod = self.value * other.value  # type: ignore[operator]
            return Magnitude.from_int(prod)
        if (self.tier == 0 and self.value == 0) or (other.tier == 0 and other.value == 0):
            return Magnitude.from_int(0)
        t = max(self.tier, other.tier, 1)
        a, b = self._pseudo_at_tier(t), other._pseudo_at_tier(t)
        if t == 1:
            return Magnitude(1, None, a.lo + b.lo, a.hi + b.hi)  # type: ignore[operator]
        return _combine_log(t, a, b)

    def add(self, other: "Magnitude") -> "Magnitude":
        if self.tier == 0 and other.tier == 0:
            return Magnitude.from_int(self.value + other.value)  # type: ignore[operator]
        if self.tier == 0 and self.value == 0:
            return other
        if other.tier == 0 and other.value == 0:
            return self
        t = max(self.tier, other.tier, 1)
        a, b = self._pseudo_at_tier(t), other._pseudo_at_tier(t)
        return _combine_log(t, a, b)

    def times_int(self, k: int) -> "Magnitude":
        return self.mul(Magnitude.from_int(k))

    def sub_one(self) -> "Magnitude":
        """x - 1, for x >= 2."""
        if self.tier == 0:
            if self.value < 2:  # type: ignore[operator]
                raise ValueError("sub_one needs a value >= 2")
            return Magnitude.from_int(self.value - 1)  # type: ignore[operator]
        if self.tier == 1:
            # log2(x-1) >= log2(x) - 1.443/(x-1); tiny once x >= 2^21.
            slack = _EPS if self.lo >= 21 else Fraction(1)  # type: ignore[operator]
            return Magnitude(1, None, self.lo - slack, self.hi)  # type: ignore[operator]
        slack = _EPS if self.lo >= 5 else Fraction(1)  # type: ignore[operator]
        return Magnitude(self.tier, None, self.lo - slack, self.hi)  # type: ignore[operator]

    def pow2(self) -> "Magnitude":
        """2 raised to this magnitude."""
        if self.tier == 0:
            if self.value <= _MAX_EXACT_BITS:  # type: ignore[operator]
                return Magnitude.from_int(1 << self.value)  # type: ignore[operator]
            v = Fraction(self.value)  # type: ignore[arg-type]
            return Magnitude(1, None, v, v)
        return Magnitude(self.tier + 1, None, self.lo, self.hi)

    def binom_3k_k(self) -> "Magnitude":
        """C(3k, k) where k is this magnitude."""
        if self.tier == 0:
            k = self.value  # type: ignore[assignment]
            if k <= _MAX_EXACT_BINOM_K:
                return Magnitude.from_int(math.comb(3 * k, k))
            # 2^(a*k)/(3k+1) <= C(3k,k) <= 2^(a*k) with a = log2(27/4).
            corr_hi = _log2_int_bounds(3 * k + 1)[1]
            return Magnitude(1, None, _A_LO * k - corr_hi, _A_HI * k)
        if self.tier == 1:
            # log2(log2 C) in [log2(a) + log2(k) - eps, log2(a) + log2(k)]
            # once the -log2(3k+1) correction is relatively negligible.
            if self.lo >= 40:  # type: ignore[operator]
                return Magnitude(2, None, _LA_LO + self.lo - _EPS, _LA_HI + self.hi)  # type: ignore[operator]
            return Magnitude(2, None, self.lo, _LA_HI + self.hi + 1)  # type: ignore[operator]
        # C >= k keeps the lower bound; upper absorbs the constant factor.
        slack = _EPS if self.lo >= 21 else Fraction(1)  # type: ignore[operator]
        return Magnitude(self.tier + 1, None, self.lo, self.hi + slack)  # type: ignore[operator]

    # -- comparisons -------------------------------------------------------

    def cmp(self, other: "Magnitude") -> int:
        """-1, 0 or 1; raises UnknownOrder when bounds cannot decide."""
        if self.tier == 0 and other.tier == 0:
            a, b = self.value, other.value
            return (a > b) - (a < b)  # type: ignore[operator]
        t = max(self.tier, other.tier, 1)
        a, b = self._pseudo_at_tier(t), other._pseudo_at_tier(t)
        if a.lo > b.hi:  # type: ignore[operator]
            return 1
        if a.hi < b.lo:  # type: ignore[operator]
            return -1
        raise UnknownOrder(f"cannot order {self!r} against {other!r}")

    def __lt__(self, other: "Magnitude") -> bool:
        return self.cmp(other) < 0

    def __gt__(self, other: "Magnitude") -> bool:
        return self.cmp(other) > 0

    def __le__(self, other: "Magnitude") -> bool:
        return self.cmp(other) <= 0

    def __ge__(self, other: "Magnitude") -> bool:
        return self.cmp(other) >= 0

    def eq_exact(self, other: "Magnitude") -> bool:
        return self.tier == 0 and other.tier == 0 and self.value == other.value

    # -- display -----------------------------------------------------------

    def describe(self) -> str:
        if self.tier == 0:
            v = self.value
            if v.bit_length() <= 64:  # type: ignore[union-attr]
                return str(v)
            return f"{v} (exact)"  # type: ignore[str-format]
        prefix = "2^" * self.tier
        lo, hi = float(self.lo), float(self.hi)  # type: ignore[arg-type]
        return f"{prefix}[{lo:.6g}, {hi:.6g}]"

    def __repr__(self) -> str:
        if self.tier == 0:
            v = self.value
            s = str(v) if v.bit_length() <= 40 else f"~2^{v.bit_length() - 1}"  # type: ignore[union-attr]
            return f"Magnitude({s})"
        return f"Magnitude({self.describe()})"


def _combine_log(t: int, a: Magnitude, b: Magnitude) -> Magnitude:
    """Interval for a max-dominated combination at tier t >= 1.

    Covers tier-1 addition (log2(x+y) lies in [max, max+1]) and tier >= 2
    multiplication and addition, where the combination reduces to adding the
    quantities one tier down and taking log2.  When one operand dominates by
    at least 2^30 the +1 tightens to a tiny one-sided slack.
    """
    lo = max(a.lo, b.lo)  # type: ignore[type-var]
    hi = max(a.hi, b.hi)  # type: ignore[type-var]
    gap_ab = a.lo - b.hi  # type: ignore[operator]
    gap_ba = b.lo - a.hi  # type: ignore[operator]
    if max(gap_ab, gap_ba) >= 30:
        return Magnitude(t, None, lo, hi + _EPS)
    return Magnitude(t, None, lo, hi + 1)
