"""Dyadic interval arithmetic and the certified sign-decision protocol.

Intervals are stored as integer mantissa pairs at a shared power-of-two
exponent, so every +, -, * on them is exact; outward rounding happens only
when a leaf value (a rational or a trigonometric constant) is converted to
dyadic form.  Sign decisions escalate the working precision; expressions
whose leaves carry algebraic metadata additionally get a rigorous zero
certificate from the algebraic-integer norm bound, so they can never end
ambiguous.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

import gmpy2

from .errors import AmbiguousSign

DEFAULT_START_PRECISION = 64
DEFAULT_PRECISION_CAP = 4096


class IndeterminateInterval(Exception):
    """Control flow: a leaf enclosure (e.g. cot near its pole) could not be
    produced at the current working precision; retry with more bits."""


@dataclass(frozen=True, slots=True)
class Interval:
    """[lo, hi] * 2**exp with integer lo <= hi."""

    lo: int
    hi: int
    exp: int

    def __post_init__(self):
        if self.lo > self.hi:
            raise ValueError("interval endpoints out of order")

    # -- constructors ------------------------------------------------------

    @staticmethod
    def exact_int(n: int) -> "Interval":
        return Interval(n, n, 0)

    @staticmethod
    def from_fraction(q: Fraction, prec: int) -> "Interval":
        """Outward-rounded enclosure at 2**-prec resolution (exact when the
        denominator is a power of two)."""
        num, den = q.numerator, q.denominator
        if den & (den - 1) == 0:  # power of two: representable exactly
            shift = den.bit_length() - 1
            return Interval(num, num, -shift)
        lo = (num << prec) // den
        hi = -((-num << prec) // den)
        return Interval(lo, hi, -prec)

    # -- queries -----------------------------------------------------------

    def sign(self) -> int | None:
        """-1, 0 (exact zero) or +1 if certified, else None."""
        if self.lo > 0:
            return 1
        if self.hi < 0:
            return -1
        if self.lo == 0 and self.hi == 0:
            return 0
        return None

    def mag_below(self, threshold_log2: int) -> bool:
        """True if |x| < 2**threshold_log2 for every x in the interval."""
        bound = max(self.hi, -self.lo)
        if bound <= 0:
            return True
        return bound.bit_length() + self.exp < threshold_log2

    def contains_zero(self) -> bool:
        return self.lo <= 0 <= self.hi

    def midpoint_float(self) -> float:
        m = self.lo + self.hi
        e = self.exp - 1
        bl = m.bit_length()
        if bl > 900:
            m >>= bl - 900
            e += bl - 900
        try:
            return math.ldexp(float(m), e)
        except OverflowError:
            return math.inf if m > 0 else -math.inf

    # -- exact arithmetic ---------------------------------------------------

    def _align(self, other: "Interval") -> tuple[int, int, int, int, int]:
        e = min(self.exp, other.exp)
        s1 = self.exp - e
        s2 = other.exp - e
        return (self.lo << s1, self.hi << s1, other.lo << s2, other.hi << s2, e)

    def __add__(self, other: "Interval") -> "Interval":
        a, b, c, d, e = self._align(other)
        return Interval(a + c, b + d, e)

    def __sub__(self, other: "Interval") -> "Interval":
        a, b, c, d, e = self._align(other)
        return Interval(a - d, b - c, e)

    def __neg__(self) -> "Interval":
        return Interval(-self.hi, -self.lo, self.exp)

    def __mul__(self, other: "Interval") -> "Interval":
        p1 = self.lo * other.lo
        p2 = self.lo * other.hi
        p3 = self.hi * other.lo
        p4 = self.hi * other.hi
        return Interval(min(p1, p2, p3, p4), max(p1, p2, p3, p4), self.exp + other.exp)

    def reciprocal(self, prec: int) -> "Interval | None":
        """1/x, outward rounded; None if the interval contains zero."""
        if self.contains_zero():
            return None
        # 1 / (m * 2**e) = (2**(prec) / m) * 2**(-prec - e)
        shift = prec + 2 * max(abs(self.lo).bit_length(), abs(self.hi).bit_length())
        lo = (1 << shift) // self.hi if self.hi > 0 else -((-(1 << shift)) // self.hi)
        hi = (1 << shift) // self.lo if self.lo > 0 else -((-(1 << shift)) // self.lo)
        lo, hi = min(lo, hi) - 1, max(lo, hi) + 1
        return Interval(lo, hi, -shift - self.exp)

    def divide(self, other: "Interval", prec: int) -> "Interval | None":
        r = other.reciprocal(prec)
        return None if r is None else self * r


def _mpfr_to_interval(v, slack_exp: int) -> Interval:
    """Enclose an mpfr value with +-2**slack_exp absolute slack."""
    m, e = v.as_mantissa_exp()
    m, e = int(m), int(e)
    if e > slack_exp:
        m <<= e - slack_exp
        e = slack_exp
    pad = 1 << (slack_exp - e)
    return Interval(m - pad, m + pad, e)


def trig_interval(fn: str, turns: Fraction, prec: int) -> Interval:
    """Certified enclosure of cos/sin/cot(pi * turns) at ~prec bits.

    Uses correctly-rounded mpfr evaluation at prec+32 bits and widens by a
    slack dominating the argument and evaluation errors (Lipschitz constant
    of cos/sin is 1; |pi * turns| < 2*pi for turns reduced mod 2).  cot goes
    through interval division and raises IndeterminateInterval while the
    sine enclosure still straddles zero.
    """
    work = prec + 32
    slack_exp = -(work - 8)
    with gmpy2.context(precision=work):
        x = gmpy2.const_pi() * turns.numerator / turns.denominator
        if fn in ("cos", "cot"):
            c = _mpfr_to_interval(gmpy2.cos(x), slack_exp)
        if fn in ("sin", "cot"):
            s = _mpfr_to_interval(gmpy2.sin(x), slack_exp)
    if fn == "cos":
        return c
    if fn == "sin":
        return s
    quot = c.divide(s, prec)
    if quot is None:
        raise IndeterminateInterval()
    return quot


# -- algebraic metadata -----------------------------------------------------


def _totient(n: int) -> int:
    result = n
    p = 2
    m = n
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            result -= result // p
        p += 1
    if m > 1:
        result -= result // m
    return result


_TOTIENT_CACHE: dict[int, int] = {}


def totient(n: int) -> int:
    if n not in _TOTIENT_CACHE:
        _TOTIENT_CACHE[n] = _totient(n)
    return _TOTIENT_CACHE[n]


@dataclass(frozen=True, slots=True)
class AlgMeta:
    """Certificate data for a real algebraic number x in Q(zeta_order):
    den*x is an algebraic integer all of whose conjugates have absolute
    value at most bound.  Nonzero x then satisfies
    |x| >= 1 / (den * bound**(phi(order)-1)), which turns a sufficiently
    narrow interval around zero into a proof that x == 0.
    """

    order: int
    den: int
    bound: int

    def __add__(self, other: "AlgMeta") -> "AlgMeta":
        order = math.lcm(self.order, other.order)
        den = math.lcm(self.den, other.den)
        bound = (den // self.den) * self.bound + (den // other.den) * other.bound
        return AlgMeta(order, den, bound)

    def __mul__(self, other: "AlgMeta") -> "AlgMeta":
        return AlgMeta(
            math.lcm(self.order, other.order),
            self.den * other.den,
            self.bound * other.bound,
        )

    def __neg__(self) -> "AlgMeta":
        return self

    def zero_threshold_log2(self) -> int:
        """T with |x| >= 2**T for every nonzero x carrying this metadata."""
        if self.bound == 0:
            return 1  # the value is identically zero
        d = totient(self.order)
        return -(self.den.bit_length() + (d - 1) * self.bound.bit_length() + 2)


RATIONAL_META_ONE = AlgMeta(1, 1, 1)


def rational_meta(q: Fraction) -> AlgMeta:
    return AlgMeta(1, q.denominator, abs(q.numerator))


# -- certified values and the sign protocol ---------------------------------


class CertValue:
    """A node of a certified-evaluation expression: an interval enclosure at
    the current working precision plus optional algebraic metadata."""

    __slots__ = ("iv", "meta")

    def __init__(self, iv: Interval, meta: AlgMeta | None):
        self.iv = iv
        self.meta = meta

    def __add__(self, other: "CertValue") -> "CertValue":
        m = self.meta + other.meta if self.meta and other.meta else None
        return CertValue(self.iv + other.iv, m)

    def __sub__(self, other: "CertValue") -> "CertValue":
        m = self.meta + other.meta if self.meta and other.meta else None
        return CertValue(self.iv - other.iv, m)

    def __mul__(self, other: "CertValue") -> "CertValue":
        m = self.meta * other.meta if self.meta and other.meta else None
        return CertValue(self.iv * other.iv, m)

    def __neg__(self) -> "CertValue":
        return CertValue(-self.iv, self.meta)


def certified_sign(
    evaluate,
    start_prec: int = DEFAULT_START_PRECISION,
    cap: int = DEFAULT_PRECISION_CAP,
) -> int:
    """Run the adaptive sign protocol on ``evaluate(prec) -> CertValue``.

    Doubles the working precision until the enclosure certifies a sign, is
    exactly [0, 0], or (with algebraic metadata) is narrower than the norm
    bound's zero threshold.  Metadata-free expressions that stay ambiguous
    at the cap raise AmbiguousSign rather than guess.
    """
    prec = start_prec
    while True:
        try:
            val = evaluate(prec)
        except IndeterminateInterval:
            val = None
        if val is not None:
            s = val.iv.sign()
            if s is not None:
                return s
            if val.meta is not None:
                threshold = val.meta.zero_threshold_log2()
                if val.iv.mag_below(threshold):
                    return 0
                # jump straight to the precision that must decide the sign
                prec = max(2 * prec, -threshold + 32)
                continue
            if prec >= cap:
                raise AmbiguousSign(cap)
        elif prec >= (1 << 24):
            raise AmbiguousSign(prec, "leaf evaluation failed to converge")
        prec *= 2
