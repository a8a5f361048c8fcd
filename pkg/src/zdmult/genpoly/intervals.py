"""Dyadic interval arithmetic with outward rounding.

An interval at precision p is a pair of integers ``(lo, hi)`` standing for
``[lo / 2^p, hi / 2^p]``.  All operations round outward to the grid, so an
enclosure computed at precision 2p always sits inside the one computed at p
(for nested inputs), which is what the adaptive retries rely on.
"""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache


@dataclass(frozen=True)
class IntervalValue:
    """Certified enclosure ``lower <= value <= upper``."""

    lower: Fraction
    upper: Fraction
    precision: int

    def __post_init__(self):
        if self.lower > self.upper:
            raise ValueError("empty interval")

    @property
    def width(self) -> Fraction:
        return self.upper - self.lower

    @property
    def exact(self) -> bool:
        return self.lower == self.upper

    def contains(self, other: IntervalValue | Fraction | int) -> bool:
        if isinstance(other, IntervalValue):
            return self.lower <= other.lower and other.upper <= self.upper
        return self.lower <= other <= self.upper

    def midpoint(self) -> float:
        return float((self.lower + self.upper) / 2)

    def to_dict(self) -> dict:
        return {
            "lower": str(self.lower),
            "upper": str(self.upper),
            "approx": self.midpoint(),
            "precision": self.precision,
        }


class Straddle(Exception):
    """Internal signal: a fractional part could not be resolved at this precision."""


def _ceil_shift(a: int, p: int) -> int:
    return -((-a) >> p)


@dataclass(frozen=True)
class Iv:
    lo: int
    hi: int
    p: int

    @staticmethod
    def exact_int(n: int, p: int) -> Iv:
        return Iv(n << p, n << p, p)

    @staticmethod
    def of_fraction(q: Fraction, p: int) -> Iv:
        num = q.numerator << p
        lo = num // q.denominator
        hi = -((-num) // q.denominator)
        return Iv(lo, hi, p)

    def __add__(self, o: Iv) -> Iv:
        return Iv(self.lo + o.lo, self.hi + o.hi, self.p)

    def __mul__(self, o: Iv) -> Iv:
        c = (self.lo * o.lo, self.lo * o.hi, self.hi * o.lo, self.hi * o.hi)
        return Iv(min(c) >> self.p, _ceil_shift(max(c), self.p), self.p)

    def frac(self) -> Iv:
        k = self.lo >> self.p
        if self.hi >= (k + 1) << self.p:
            raise Straddle
        s = k << self.p
        return Iv(self.lo - s, self.hi - s, self.p)

    def dist_to_int(self) -> Iv:
        """Enclosure of the distance to the nearest integer over the interval."""
        one = 1 << self.p
        half = one >> 1

        def dist(a: int) -> int:
            r = a % one
            return min(r, one - r)

        def hits(offset: int) -> bool:
            # is some point offset + k * one (k integer) inside [lo, hi]?
            first = -((offset - self.lo) // one) * one + offset
            return first <= self.hi

        ends = (dist(self.lo), dist(self.hi))
        lower = 0 if hits(0) else min(ends)
        upper = half if hits(half) else max(ends)
        return Iv(lower, upper, self.p)

    def value(self) -> IntervalValue:
        den = 1 << self.p
        return IntervalValue(Fraction(self.lo, den), Fraction(self.hi, den), self.p)


# ---------------------------------------------------------------------------
# constants


def _iroot(n: int, j: int) -> int:
    """floor(n^(1/j)) for n >= 0."""
    if n < 2:
        return n
    x = 1 << -(-n.bit_length() // j)
    while True:
        y = ((j - 1) * x + n // x ** (j - 1)) // j
        if y >= x:
            break
        x = y
    while x ** j > n:
        x -= 1
    while (x + 1) ** j <= n:
        x += 1
    return x


def root_interval(k: int, j: int, p: int) -> Iv:
    """Enclosure of the real j-th root of k (k >= 0, or k < 0 with j odd)."""
    if j < 1:
        raise ValueError("root index must be positive")
    if k < 0:
        if j % 2 == 0:
            raise ValueError("even root of a negative number")
        r = root_interval(-k, j, p)
        return Iv(-r.hi, -r.lo, p)
    scaled = k << (j * p)
    r = _iroot(scaled, j)
    return Iv(r, r if r ** j == scaled else r + 1, p)


def _atan_inv(x: int, bits: int) -> tuple[int, int]:
    """Fixed-point atan(1/x) at ``bits`` bits with an error bound in ulps."""
    one = 1 << bits
    power = one // x
    total = power
    x2 = x * x
    k = 1
    terms = 1
    sign = -1
    while power:
        power //= x2
        term = power // (2 * k + 1)
        total += sign * term
        sign = -sign
        k += 1
        terms += 1
    # each term is a floor of a floor (< 2 ulps); the alternating tail is < 1 ulp
    return total, 2 * terms + 1


@lru_cache(maxsize=None)
def _pi_fixed(bits: int) -> tuple[int, int]:
    a, ea = _atan_inv(5, bits)
    b, eb = _atan_inv(239, bits)
    return 16 * a - 4 * b, 16 * ea + 4 * eb


@lru_cache(maxsize=None)
def _e_fixed(bits: int) -> tuple[int, int]:
    one = 1 << bits
    total = 0
    term = one
    k = 0
    while term:
        total += term
        k += 1
        term //= k
    # k truncations of < 1 ulp each, plus the tail below the last (zero) term
    return total, k + 2


_CONST_BITS = 4096


def _fixed_const(fn, p: int) -> Iv:
    bits = max(_CONST_BITS, p) + 32
    v, err = fn(bits)
    shift = bits - p
    return Iv((v - err) >> shift, _ceil_shift(v + err, shift), p)


def pi_interval(p: int) -> Iv:
    return _fixed_const(_pi_fixed, p)


def e_interval(p: int) -> Iv:
    return _fixed_const(_e_fixed, p)
