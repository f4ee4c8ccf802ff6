"""The scalar tower: exact rationals, symbolic trig values, adaptive reals.

Every geometric predicate in the package reduces to sign decisions on
polynomial expressions in scalars.  Rationals decide signs exactly; trig
symbols (cos/sin/cot of rational multiples of pi) and their polynomial
combinations carry both a certified interval thunk and algebraic metadata,
so their signs are always decidable too; raw adaptive reals without
metadata escalate precision up to a cap and then raise AmbiguousSign.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Callable, Optional, Union

from .cyclotomic import CycNum, trig_cycnum
from .errors import DomainError
from .intervals import (
    DEFAULT_PRECISION_CAP,
    DEFAULT_START_PRECISION,
    AlgMeta,
    CertValue,
    Interval,
    certified_sign,
    rational_meta,
    trig_interval,
)


@dataclass(frozen=True, slots=True)
class TrigScalar:
    """fn(pi * turns) with fn in {cos, sin, cot}; turns reduced mod 2."""

    fn: str
    turns: Fraction

    def __post_init__(self):
        if self.fn not in ("cos", "sin", "cot"):
            raise ValueError(f"unknown trig selector {self.fn!r}")
        object.__setattr__(self, "turns", Fraction(self.turns) % 2)
        if self.fn == "cot" and self.turns.denominator == 1:
            raise DomainError(f"cot has a pole at pi * {self.turns}")

    def __repr__(self):
        return f"{self.fn}({self.turns}*pi)"


class AdaptiveReal:
    """An interval-backed real with a working precision, optionally carrying
    algebraic metadata (for rigorous zero certificates) and an exact
    cyclotomic handle (for symbolic linear algebra and serialization)."""

    __slots__ = ("_eval", "meta", "_cyc_fn", "_cyc", "label", "_iv_cache")

    def __init__(
        self,
        eval_fn: Callable[[int], Interval],
        meta: AlgMeta | None = None,
        cyc_fn: Optional[Callable[[], CycNum]] = None,
        label: str = "adaptive",
    ):
        self._eval = eval_fn
        self.meta = meta
        self._cyc_fn = cyc_fn
        self._cyc = None
        self.label = label
        self._iv_cache: dict[int, Interval] = {}

    def interval(self, prec: int) -> Interval:
        iv = self._iv_cache.get(prec)
        if iv is None:
            iv = self._eval(prec)
            if len(self._iv_cache) > 8:
                self._iv_cache.clear()
            self._iv_cache[prec] = iv
        return iv

    def cyc(self) -> CycNum | None:
        if self._cyc is None and self._cyc_fn is not None:
            self._cyc = self._cyc_fn()
        return self._cyc

    def __repr__(self):
        return f"AdaptiveReal({self.label})"


Scalar = Union[Fraction, TrigScalar, AdaptiveReal]


def as_scalar(x) -> Scalar:
    if isinstance(x, (int, Fraction)):
        return Fraction(x)
    if isinstance(x, (TrigScalar, AdaptiveReal)):
        return x
    raise TypeError(f"cannot interpret {x!r} as a scalar")


def is_rational(s: Scalar) -> bool:
    return isinstance(s, Fraction)


# -- certified views ----------------------------------------------------------

_TRIG_IV_CACHE: dict[tuple[str, Fraction, int], Interval] = {}


def scalar_interval(s: Scalar, prec: int) -> Interval:
    if isinstance(s, Fraction):
        return Interval.from_fraction(s, prec)
    if isinstance(s, TrigScalar):
        key = (s.fn, s.turns, prec)
        iv = _TRIG_IV_CACHE.get(key)
        if iv is None:
            iv = trig_interval(s.fn, s.turns, prec)
            if len(_TRIG_IV_CACHE) > 100_000:
                _TRIG_IV_CACHE.clear()
            _TRIG_IV_CACHE[key] = iv
        return iv
    return s.interval(prec)


def _trig_meta(s: TrigScalar) -> AlgMeta:
    b = s.turns.denominator
    order = 4 * b if b % 2 else 2 * b  # lcm(2b, 4)
    if s.fn in ("cos", "sin"):
        return AlgMeta(order, 2, 2)
    # cot: den * cot is an algebraic integer with den = |Phi_b(1)| (p for
    # prime powers, else 1); conjugates are cot at other primitive angles,
    # all bounded by b in absolute value.
    den = _phi_at_one(b)
    return AlgMeta(order, den, den * b)


def _phi_at_one(b: int) -> int:
    """|Phi_b(1)|: p if b is a prime power p**k (b>1), else 1."""
    if b <= 1:
        return 1
    m = b
    p = 2
    while p * p <= m:
        if m % p == 0:
            while m % p == 0:
                m //= p
            return p if m == 1 else 1
        p += 1
    return m  # b itself prime


def scalar_meta(s: Scalar) -> AlgMeta | None:
    if isinstance(s, Fraction):
        return rational_meta(s)
    if isinstance(s, TrigScalar):
        return _trig_meta(s)
    return s.meta


def scalar_cert(s: Scalar, prec: int) -> CertValue:
    return CertValue(scalar_interval(s, prec), scalar_meta(s))


def scalar_cyc(s: Scalar) -> CycNum | None:
    from .cyclotomic import CycField

    if isinstance(s, Fraction):
        return CycField(1).from_rational(s)
    if isinstance(s, TrigScalar):
        return trig_cycnum(s.fn, s.turns)
    return s.cyc()


def scalar_float(s: Scalar) -> float:
    if isinstance(s, Fraction):
        return float(s)
    return scalar_interval(s, 64).midpoint_float()


def scalar_sign(
    s: Scalar,
    start_prec: int = DEFAULT_START_PRECISION,
    cap: int = DEFAULT_PRECISION_CAP,
) -> int:
    if isinstance(s, Fraction):
        return (s > 0) - (s < 0)
    return certified_sign(lambda p: scalar_cert(s, p), start_prec, cap)


def scalar_is_zero(s: Scalar, **kw) -> bool:
    return scalar_sign(s, **kw) == 0


# -- arithmetic ---------------------------------------------------------------


def _compose(op: str, a: Scalar, b: Scalar | None = None) -> AdaptiveReal:
    ma = scalar_meta(a)
    if b is None:

        def ev_neg(prec):
            return -scalar_interval(a, prec)

        return AdaptiveReal(
            ev_neg,
            ma,
            (lambda: -scalar_cyc(a)) if _has_cyc(a) else None,
            label=f"-({_label(a)})",
        )
    mb = scalar_meta(b)
    meta = None
    if ma is not None and mb is not None:
        meta = ma + mb if op in ("add", "sub") else ma * mb

    if op == "add":
        ev = lambda prec: scalar_interval(a, prec) + scalar_interval(b, prec)
        sym = "+"
    elif op == "sub":
        ev = lambda prec: scalar_interval(a, prec) - scalar_interval(b, prec)
        sym = "-"
    else:
        ev = lambda prec: scalar_interval(a, prec) * scalar_interval(b, prec)
        sym = "*"

    cyc_fn = None
    if _has_cyc(a) and _has_cyc(b):
        if op == "add":
            cyc_fn = lambda: scalar_cyc(a) + scalar_cyc(b)
        elif op == "sub":
            cyc_fn = lambda: scalar_cyc(a) - scalar_cyc(b)
        else:
            cyc_fn = lambda: scalar_cyc(a) * scalar_cyc(b)
    return AdaptiveReal(ev, meta, cyc_fn, label=f"({_label(a)}){sym}({_label(b)})")


def _has_cyc(s: Scalar) -> bool:
    if isinstance(s, (Fraction, TrigScalar)):
        return True
    return s._cyc_fn is not None or s._cyc is not None


def _label(s: Scalar) -> str:
    if isinstance(s, AdaptiveReal):
        return s.label
    return repr(s)


def s_add(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a + b
    return _compose("add", a, b)


def s_sub(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a - b
    return _compose("sub", a, b)


def s_mul(a: Scalar, b: Scalar) -> Scalar:
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a * b
    return _compose("mul", a, b)


def s_neg(a: Scalar) -> Scalar:
    if isinstance(a, Fraction):
        return -a
    return _compose("neg", a)


def scalar_eq(a: Scalar, b: Scalar, **kw) -> bool:
    """Certified equality of scalar values."""
    if isinstance(a, Fraction) and isinstance(b, Fraction):
        return a == b
    if (
        isinstance(a, TrigScalar)
        and isinstance(b, TrigScalar)
        and a.fn == b.fn
        and a.turns == b.turns
    ):
        return True
    return scalar_is_zero(s_sub(a, b), **kw)


def scalar_repr_data(s: Scalar):
    """Structural form for serialization: see codec module."""
    if isinstance(s, Fraction):
        return ("rational", s)
    if isinstance(s, TrigScalar):
        return ("trig", s.fn, s.turns)
    c = s.cyc()
    if c is not None:
        return ("cyclotomic", c)
    raise DomainError("raw adaptive-real scalars have no lossless document form")
