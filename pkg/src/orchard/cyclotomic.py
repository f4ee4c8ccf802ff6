"""Exact arithmetic in cyclotomic fields Q(zeta_N).

Numbers are Fraction-coefficient vectors in the power basis
1, zeta, ..., zeta**(phi(N)-1) modulo the N-th cyclotomic polynomial.
This is the exact backing store for trigonometric scalars: cos, sin and
cot of rational multiples of pi all live in Q(zeta_N) for suitable N, so
equality and zero tests are decidable, and linear algebra (cubic fitting
through root-of-unity points) stays exact.
"""

from __future__ import annotations

import math
from fractions import Fraction
from functools import lru_cache

from .errors import DomainError
from .intervals import AlgMeta, Interval, totient, trig_interval


# -- integer polynomial helpers (dense lists, index = degree) ----------------


def _poly_divmod_int(num: list[int], den: list[int]) -> tuple[list[int], list[int]]:
    """Exact division of integer polynomials with monic divisor."""
    num = list(num)
    q = [0] * (len(num) - len(den) + 1)
    for i in range(len(num) - len(den), -1, -1):
        c = num[i + len(den) - 1]
        if c:
            q[i] = c
            for j, d in enumerate(den):
                num[i + j] -= c * d
    while num and num[-1] == 0:
        num.pop()
    return q, num


@lru_cache(maxsize=None)
def cyclotomic_polynomial(n: int) -> tuple[int, ...]:
    """Integer coefficients of Phi_n, low degree first."""
    if n == 1:
        return (-1, 1)
    poly = [0] * n + [1]
    poly[0] = -1  # x**n - 1
    for d in range(1, n):
        if n % d == 0:
            poly, rem = _poly_divmod_int(poly, list(cyclotomic_polynomial(d)))
            assert not rem
    return tuple(poly)


class CycField:
    """Q(zeta_order), with reduction tables for powers of zeta."""

    _cache: dict[int, "CycField"] = {}

    def __new__(cls, order: int):
        if order in cls._cache:
            return cls._cache[order]
        self = super().__new__(cls)
        self.order = order
        self.phi = totient(order)
        self.modulus = cyclotomic_polynomial(order)
        # power_table[k] = vector of zeta**k in the power basis, all k < order
        table = []
        deg = self.phi
        for k in range(order):
            if k < deg:
                row = [0] * deg
                row[k] = 1
            else:
                prev = table[k - 1]
                row = [0] + list(prev[: deg - 1])
                top = prev[deg - 1]
                if top:
                    for j in range(deg):
                        row[j] -= top * self.modulus[j]
            table.append(row)
        self.power_table = [tuple(r) for r in table]
        cls._cache[order] = self
        return self

    def zero(self) -> "CycNum":
        return CycNum(self, (Fraction(0),) * self.phi)

    def one(self) -> "CycNum":
        return self.from_rational(Fraction(1))

    def from_rational(self, q) -> "CycNum":
        vec = [Fraction(0)] * self.phi
        vec[0] = Fraction(q)
        return CycNum(self, tuple(vec))

    def root_of_unity(self, k: int) -> "CycNum":
        """zeta_order ** k."""
        row = self.power_table[k % self.order]
        return CycNum(self, tuple(Fraction(c) for c in row))

    def reduce(self, coeffs: list[Fraction]) -> tuple[Fraction, ...]:
        """Reduce a coefficient list of any length (powers fold mod order
        first, then through the cyclotomic relation)."""
        deg = self.phi
        acc = [Fraction(0)] * deg
        for k, c in enumerate(coeffs):
            if not c:
                continue
            row = self.power_table[k % self.order]
            for j in range(deg):
                if row[j]:
                    acc[j] += c * row[j]
        return tuple(acc)

    @lru_cache(maxsize=None)
    def _unity_index(self) -> dict[tuple, int]:
        return {self.root_of_unity(k).vec: k for k in range(self.order)}


class CycNum:
    """An element of Q(zeta_N) in reduced power-basis form."""

    __slots__ = ("field", "vec")

    def __init__(self, field: CycField, vec: tuple[Fraction, ...]):
        self.field = field
        self.vec = vec

    # -- ring structure ------------------------------------------------------

    def _coerce(self, other) -> tuple["CycNum", "CycNum"]:
        if isinstance(other, (int, Fraction)):
            other = self.field.from_rational(other)
        if other.field.order == self.field.order:
            return self, other
        target = CycField(math.lcm(self.field.order, other.field.order))
        return self.embed(target), other.embed(target)

    def embed(self, target: CycField) -> "CycNum":
        if target.order == self.field.order:
            return self
        step = target.order // self.field.order
        assert step * self.field.order == target.order
        coeffs = [Fraction(0)] * (target.order)
        for k, c in enumerate(self.vec):
            coeffs[k * step] += c
        return CycNum(target, target.reduce(coeffs))

    def __add__(self, other):
        a, b = self._coerce(other)
        return CycNum(a.field, tuple(x + y for x, y in zip(a.vec, b.vec)))

    __radd__ = __add__

    def __sub__(self, other):
        a, b = self._coerce(other)
        return CycNum(a.field, tuple(x - y for x, y in zip(a.vec, b.vec)))

    def __rsub__(self, other):
        return (-self) + other

    def __neg__(self):
        return CycNum(self.field, tuple(-x for x in self.vec))

    def __mul__(self, other):
        if isinstance(other, (int, Fraction)):
            return CycNum(self.field, tuple(x * other for x in self.vec))
        a, b = self._coerce(other)
        deg = a.field.phi
        conv = [Fraction(0)] * (2 * deg - 1)
        av, bv = a.vec, b.vec
        for i in range(deg):
            ai = av[i]
            if not ai:
                continue
            for j in range(deg):
                if bv[j]:
                    conv[i + j] += ai * bv[j]
        return CycNum(a.field, a.field.reduce(conv))

    __rmul__ = __mul__

    def inverse(self) -> "CycNum":
        """Extended Euclid against the cyclotomic modulus."""
        if self.is_zero():
            raise ZeroDivisionError("inverse of zero cyclotomic number")
        mod = [Fraction(c) for c in self.field.modulus]
        r0, r1 = mod, list(self.vec)
        while r1 and not r1[-1]:
            r1.pop()
        s0, s1 = [Fraction(0)], [Fraction(1)]

        def poly_sub_scaled(a, b, c, shift):
            out = list(a) + [Fraction(0)] * max(0, len(b) + shift - len(a))
            for i, bi in enumerate(b):
                if bi:
                    out[i + shift] -= c * bi
            while out and not out[-1]:
                out.pop()
            return out

        while len(r1) > 1:
            # divide r0 by r1, tracking the Bezout coefficient of self
            q_shift_pairs = []
            rem = list(r0)
            while len(rem) >= len(r1):
                c = rem[-1] / r1[-1]
                shift = len(rem) - len(r1)
                q_shift_pairs.append((c, shift))
                rem = poly_sub_scaled(rem, r1, c, shift)
            new_s = list(s0)
            for c, shift in q_shift_pairs:
                new_s = poly_sub_scaled(new_s, s1, c, shift)
            r0, r1 = r1, rem
            s0, s1 = s1, new_s
            if not r1:
                raise ZeroDivisionError("zero divisor in cyclotomic field")
        # r1 is a nonzero constant: inverse = s1 / r1[0]
        inv_vec = [c / r1[0] for c in s1]
        inv_vec += [Fraction(0)] * (self.field.phi - len(inv_vec))
        return CycNum(self.field, self.field.reduce(inv_vec))

    def __truediv__(self, other):
        if isinstance(other, (int, Fraction)):
            return self * (Fraction(1) / Fraction(other))
        a, b = self._coerce(other)
        return a * b.inverse()

    # -- predicates ----------------------------------------------------------

    def is_zero(self) -> bool:
        return all(not c for c in self.vec)

    def is_rational(self) -> Fraction | None:
        if all(not c for c in self.vec[1:]):
            return self.vec[0]
        return None

    def __eq__(self, other):
        if not isinstance(other, (CycNum, int, Fraction)):
            return NotImplemented
        a, b = self._coerce(other)
        return a.vec == b.vec

    def __hash__(self):
        return hash((self.field.order, self.vec))

    def __repr__(self):
        return f"CycNum(zeta_{self.field.order}; {list(self.vec)})"

    def as_root_of_unity(self) -> int | None:
        """k with self == zeta_order**k, or None."""
        return self.field._unity_index().get(self.vec)

    # -- certified numeric view ---------------------------------------------

    def alg_meta(self) -> AlgMeta:
        den = 1
        for c in self.vec:
            den = math.lcm(den, c.denominator)
        bound_fr = sum(abs(c) * den for c in self.vec)
        return AlgMeta(self.field.order, den, int(math.ceil(bound_fr)))

    def interval(self, prec: int) -> Interval:
        """Enclosure of the real part (for real values this is the value)."""
        n = self.field.order
        acc = Interval.exact_int(0)
        for k, c in enumerate(self.vec):
            if not c:
                continue
            cos_iv = trig_interval("cos", Fraction(2 * k, n) % 2, prec)
            acc = acc + Interval.from_fraction(c, prec) * cos_iv
        return acc


# -- trig constructors --------------------------------------------------------


def trig_field_order(turns_den: int) -> int:
    """Order of the standard field hosting cos/sin/cot(pi * a/b): needs
    e**(i*pi/b) and the imaginary unit."""
    return math.lcm(2 * turns_den, 4)


def trig_cycnum(fn: str, turns: Fraction) -> CycNum:
    """Exact value of cos/sin/cot(pi * turns) as a cyclotomic number."""
    turns = turns % 2
    b = turns.denominator
    a = turns.numerator
    field = CycField(trig_field_order(b))
    n = field.order
    e = (a * n // (2 * b)) % n  # zeta**e = exp(i*pi*a/b)
    u = field.root_of_unity(e)
    ubar = field.root_of_unity((n - e) % n)
    ii = field.root_of_unity(n // 4)
    half = Fraction(1, 2)
    cos = (u + ubar) * half
    sin = (u - ubar) * (-half) * ii
    if fn == "cos":
        return cos
    if fn == "sin":
        return sin
    if fn == "cot":
        if sin.is_zero():
            raise DomainError(f"cot undefined at pi * {turns}")
        return cos * sin.inverse()
    raise ValueError(f"unknown trig selector {fn!r}")
