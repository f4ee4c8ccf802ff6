"""Cubic curves, exact fitting, Chasles closure, and cubic group laws.

A cubic is a 10-coefficient homogeneous form in the monomial order
X^3, X^2 Y, X Y^2, Y^3, X^2 Z, X Y Z, Y^2 Z, X Z^2, Y Z^2, Z^3.
Fitting through up to nine points is an exact nullspace computation
(rational, or cyclotomic for root-of-unity coordinates).  The group side
covers the Weierstrass chord-tangent law, the three singular-cubic
parametrizations, and the conic + line quasi-group.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .cyclotomic import CycField, CycNum
from .errors import (
    DegenerateNinePoints,
    DomainError,
    NonRationalInput,
    OffCurve,
    SingularPoint,
    UnnormalizedInput,
)
from .intervals import DEFAULT_PRECISION_CAP, DEFAULT_START_PRECISION, certified_sign
from .projective import ProjLine, ProjPoint, equivalent, meet, point
from .scalars import Scalar, s_add, s_mul, scalar_cert, scalar_cyc

MONOMIALS: tuple[tuple[int, int, int], ...] = (
    (3, 0, 0),
    (2, 1, 0),
    (1, 2, 0),
    (0, 3, 0),
    (2, 0, 1),
    (1, 1, 1),
    (0, 2, 1),
    (1, 0, 2),
    (0, 1, 2),
    (0, 0, 3),
)


@dataclass(frozen=True)
class Cubic:
    """A nonzero homogeneous cubic form; rational coefficient vectors are
    stored primitive with the first nonzero entry positive."""

    coeffs: tuple

    def __post_init__(self):
        coeffs = tuple(self.coeffs)
        if len(coeffs) != 10:
            raise ValueError("a cubic has ten coefficients")
        if all(isinstance(c, (int, Fraction)) for c in coeffs):
            coeffs = tuple(Fraction(c) for c in coeffs)
            if all(c == 0 for c in coeffs):
                raise ValueError("zero cubic form")
            den = 1
            for c in coeffs:
                den = math.lcm(den, c.denominator)
            ints = [int(c * den) for c in coeffs]
            g = math.gcd(*ints)
            ints = [v // g for v in ints]
            for v in ints:
                if v:
                    if v < 0:
                        ints = [-w for w in ints]
                    break
            coeffs = tuple(Fraction(v) for v in ints)
        object.__setattr__(self, "coeffs", coeffs)

    @property
    def is_rational(self) -> bool:
        return all(isinstance(c, Fraction) for c in self.coeffs)

    def evaluate_rational(self, p: ProjPoint) -> Fraction:
        if not (self.is_rational and p.is_rational):
            raise NonRationalInput("exact evaluation needs rational data")
        x, y, z = p.ikey
        acc = Fraction(0)
        for c, (a, b, d) in zip(self.coeffs, MONOMIALS):
            if c:
                acc += c * x**a * y**b * z**d
        return acc

    def vanishes_at(
        self,
        p: ProjPoint,
        start_prec: int = DEFAULT_START_PRECISION,
        cap: int = DEFAULT_PRECISION_CAP,
    ) -> bool:
        if self.is_rational and p.is_rational:
            return self.evaluate_rational(p) == 0

        def ev(prec):
            certs = [scalar_cert(c, prec) for c in p.coords]
            acc = None
            for coeff, (a, b, d) in zip(self.coeffs, MONOMIALS):
                term = scalar_cert(coeff, prec)
                for _ in range(a):
                    term = term * certs[0]
                for _ in range(b):
                    term = term * certs[1]
                for _ in range(d):
                    term = term * certs[2]
                acc = term if acc is None else acc + term
            return acc

        return certified_sign(ev, start_prec, cap) == 0

    def to_json_list(self) -> list[str]:
        if not self.is_rational:
            raise NonRationalInput("only rational cubics serialize")
        return [str(c) for c in self.coeffs]

    def __repr__(self):
        return f"Cubic({[str(c) for c in self.coeffs]})"


# -- exact nullspace fitting ----------------------------------------------------


def _nullspace(rows: list[list], is_zero, width: int) -> list[list]:
    """Nullspace basis of a matrix over a field (Gauss-Jordan)."""
    mat = [list(r) for r in rows]
    pivots: list[int] = []
    r = 0
    for col in range(width):
        pr = None
        for i in range(r, len(mat)):
            if not is_zero(mat[i][col]):
                pr = i
                break
        if pr is None:
            continue
        mat[r], mat[pr] = mat[pr], mat[r]
        inv = mat[r][col]
        mat[r] = [x / inv for x in mat[r]]
        for i in range(len(mat)):
            if i != r and not is_zero(mat[i][col]):
                f = mat[i][col]
                mat[i] = [a - f * b for a, b in zip(mat[i], mat[r])]
        pivots.append(col)
        r += 1
    free = [c for c in range(width) if c not in pivots]
    basis = []
    for fc in free:
        vec = [0] * width
        vec[fc] = 1
        for ri, pc in enumerate(pivots):
            vec[pc] = -mat[ri][fc]
        basis.append(vec)
    return basis


def _monomial_row_rational(p: ProjPoint) -> list[Fraction]:
    x, y, z = p.ikey
    return [Fraction(x**a * y**b * z**c) for (a, b, c) in MONOMIALS]


def fit_cubic(points: Sequence[ProjPoint]) -> list[Cubic]:
    """Exact basis of the cubics through <= 9 rational points."""
    pts = list(points)
    if not 1 <= len(pts) <= 9:
        raise ValueError("fit through 1..9 points")
    if any(not p.is_rational for p in pts):
        raise NonRationalInput("cubic fitting needs exact-rational points")
    rows = [_monomial_row_rational(p) for p in pts]
    basis = _nullspace(rows, lambda x: x == 0, 10)
    return [Cubic(tuple(Fraction(v) for v in vec)) for vec in basis]


def fit_cubic_cyclotomic(points: Sequence[ProjPoint]) -> list[tuple]:
    """Nullspace basis over the smallest cyclotomic field containing all
    coordinates; used for fitting through root-of-unity configurations.
    Returns coefficient 10-vectors of CycNum (rational vectors are promoted
    to Cubic by the caller if desired)."""
    cycs = []
    for p in points:
        row = [scalar_cyc(c) for c in p.coords]
        if any(v is None for v in row):
            raise NonRationalInput("point lacks an exact cyclotomic handle")
        cycs.append(row)
    order = 1
    for row in cycs:
        for v in row:
            order = math.lcm(order, v.field.order)
    field = CycField(order)
    rows = []
    for row in cycs:
        x, y, z = (v.embed(field) for v in row)
        rows.append(
            [
                _cyc_pow(x, a, field) * _cyc_pow(y, b, field) * _cyc_pow(z, c, field)
                for (a, b, c) in MONOMIALS
            ]
        )
    basis = _nullspace(rows, lambda v: v.is_zero() if isinstance(v, CycNum) else v == 0, 10)
    out = []
    for vec in basis:
        out.append(tuple(field.from_rational(v) if isinstance(v, int) else v for v in vec))
    return out


def _cyc_pow(v: CycNum, e: int, field: CycField) -> CycNum:
    acc = field.one()
    for _ in range(e):
        acc = acc * v
    return acc


def cyc_vector_to_cubic(vec: tuple) -> Cubic | None:
    """Convert a cyclotomic coefficient vector to a rational Cubic when all
    entries are rational."""
    rats = []
    for v in vec:
        r = v.is_rational()
        if r is None:
            return None
        rats.append(r)
    return Cubic(tuple(rats))


# -- Chasles / Cayley-Bacharach ---------------------------------------------------


@dataclass(frozen=True)
class ChaslesReport:
    points: tuple[ProjPoint, ...]
    flags: tuple[bool, ...]

    @property
    def passed(self) -> bool:
        return all(self.flags)


def chasles_check(
    triple1: Sequence[ProjLine], triple2: Sequence[ProjLine]
) -> ChaslesReport:
    """Meet two triples of lines in nine distinct points; any cubic through
    eight of them must pass through the ninth."""
    if len(triple1) != 3 or len(triple2) != 3:
        raise ValueError("need two triples of lines")
    pts = []
    for l1 in triple1:
        for l2 in triple2:
            pts.append(meet(l1, l2))
    for i in range(9):
        for j in range(i + 1, 9):
            if equivalent(pts[i], pts[j]):
                raise DegenerateNinePoints(f"intersections {i} and {j} coincide")
    if any(not p.is_rational for p in pts):
        raise NonRationalInput("chasles check needs rational lines")
    flags = []
    for omit in range(9):
        rest = [p for i, p in enumerate(pts) if i != omit]
        basis = fit_cubic(rest[:9])
        ok = all(c.evaluate_rational(pts[omit]) == 0 for c in basis)
        flags.append(ok)
    return ChaslesReport(tuple(pts), tuple(flags))


# -- abelian group elements for curve parametrizations ----------------------------

AMBIENTS = ("circle", "line", "split")


@dataclass(frozen=True)
class GroupElement:
    """circle: R/Z additive (value mod 1); line: R additive; split: the
    multiplicative reals R* (isomorphic to R x Z/2), value nonzero."""

    ambient: str
    value: Fraction

    def __post_init__(self):
        if self.ambient not in AMBIENTS:
            raise ValueError(f"unknown ambient {self.ambient!r}")
        v = Fraction(self.value)
        if self.ambient == "circle":
            v = v % 1
        if self.ambient == "split" and v == 0:
            raise DomainError("split ambient excludes zero")
        object.__setattr__(self, "value", v)

    def op(self, other: "GroupElement") -> "GroupElement":
        if other.ambient != self.ambient:
            raise ValueError("ambient mismatch")
        if self.ambient == "split":
            return GroupElement("split", self.value * other.value)
        return GroupElement(self.ambient, self.value + other.value)

    def inv(self) -> "GroupElement":
        if self.ambient == "split":
            return GroupElement("split", 1 / self.value)
        return GroupElement(self.ambient, -self.value)

    @property
    def is_identity(self) -> bool:
        if self.ambient == "split":
            return self.value == 1
        return self.value == 0

    @staticmethod
    def identity(ambient: str) -> "GroupElement":
        return GroupElement(ambient, Fraction(1 if ambient == "split" else 0))


def zero_sum(elems: Sequence[GroupElement]) -> bool:
    acc = GroupElement.identity(elems[0].ambient)
    for e in elems:
        acc = acc.op(e)
    return acc.is_identity


# -- Weierstrass chord-tangent group law ------------------------------------------


@dataclass(frozen=True)
class WeierstrassCurve:
    """y^2 z = x^3 + a x z^2 + b z^3 with identity O = [0,1,0]."""

    a: Fraction
    b: Fraction

    def __post_init__(self):
        object.__setattr__(self, "a", Fraction(self.a))
        object.__setattr__(self, "b", Fraction(self.b))

    def contains(self, p: ProjPoint) -> bool:
        if not p.is_rational:
            return False
        x, y, z = (Fraction(v) for v in p.ikey)
        return y * y * z == x**3 + self.a * x * z * z + self.b * z**3

    def _require(self, p: ProjPoint):
        if not self.contains(p):
            raise OffCurve(f"{p} is not on y^2 = x^3 + {self.a} x + {self.b}")

    @property
    def origin(self) -> ProjPoint:
        return point(0, 1, 0)

    def is_origin(self, p: ProjPoint) -> bool:
        return p.ikey == (0, 1, 0)

    def negate(self, p: ProjPoint) -> ProjPoint:
        self._require(p)
        if self.is_origin(p):
            return p
        x, y, z = p.ikey
        return point(x, -y, z)

    def add(self, p: ProjPoint, q: ProjPoint) -> ProjPoint:
        """Chord-tangent sum with the tangent used when p == q."""
        self._require(p)
        self._require(q)
        if self.is_origin(p):
            return q
        if self.is_origin(q):
            return p
        x1, y1 = Fraction(p.ikey[0], p.ikey[2]), Fraction(p.ikey[1], p.ikey[2])
        x2, y2 = Fraction(q.ikey[0], q.ikey[2]), Fraction(q.ikey[1], q.ikey[2])
        if x1 == x2:
            if y1 == -y2:
                return self.origin
            lam = (3 * x1 * x1 + self.a) / (2 * y1)
        else:
            lam = (y2 - y1) / (x2 - x1)
        x3 = lam * lam - x1 - x2
        y3 = lam * (x1 - x3) - y1
        return point(x3, y3, 1)

    def third_intersection(self, p: ProjPoint, q: ProjPoint) -> ProjPoint:
        """The remaining intersection of the chord through p, q: -(p + q)."""
        return self.negate(self.add(p, q))

    def multiple(self, p: ProjPoint, k: int) -> ProjPoint:
        acc = self.origin
        step = p
        if k < 0:
            step = self.negate(p)
            k = -k
        while k:
            if k & 1:
                acc = self.add(acc, step)
            step = self.add(step, step)
            k >>= 1
        return acc

    @staticmethod
    def through(p1: tuple, p2: tuple) -> "WeierstrassCurve":
        """The curve y^2 = x^3 + a x + b through two affine points."""
        (x1, y1), (x2, y2) = p1, p2
        x1, y1, x2, y2 = (Fraction(v) for v in (x1, y1, x2, y2))
        if x1 == x2:
            raise DomainError("need distinct x coordinates")
        a = ((y1 * y1 - x1**3) - (y2 * y2 - x2**3)) / (x1 - x2)
        b = y1 * y1 - x1**3 - a * x1
        return WeierstrassCurve(a, b)


# -- singular parametrizations -----------------------------------------------------


def acnodal_t(turns) -> Scalar:
    from .families import trig_value

    return trig_value("cot", turns)


def acnodal_point(turns) -> ProjPoint:
    """Smooth point of y^2 = x^2 (x - 1) at group parameter turns in R/Z:
    (t^2 + 1, t (t^2 + 1)) with t = cot(pi * turns); 0 is the inflection
    [0,1,0] at infinity."""
    t = Fraction(turns) % 1
    if t == 0:
        return point(0, 1, 0)
    c = acnodal_t(t)
    x = s_add(s_mul(c, c), Fraction(1))
    y = s_mul(c, x)
    return point(x, y, Fraction(1))


def nodal_point(t) -> ProjPoint:
    """(t^2 - 1, t (t^2 - 1)) on y^2 = x^2 (x + 1); t = +-1 hits the node."""
    t = Fraction(t)
    if t * t == 1:
        raise SingularPoint("parameter +-1 maps to the node")
    x = t * t - 1
    return point(x, t * x, 1)


def cuspidal_point(u) -> ProjPoint:
    """(1/u^2, 1/u^3) on y^2 = x^3; u = 0 is the inflection at infinity."""
    u = Fraction(u)
    if u == 0:
        return point(0, 1, 0)
    return point(u, 1, u**3)  # [1/u^2, 1/u^3, 1] scaled by u^3


SINGULAR_KINDS = ("nodal", "cuspidal", "acnodal")


def singular_param(kind: str, direction: str, value):
    """Mutually inverse parametrizations of the singular cubics.

    to-curve takes a GroupElement (or a bare value in the matching ambient)
    to a smooth curve point; to-group inverts it.  Ambients: nodal -> split
    (multiplicative, s = (y-x)/(y+x)), cuspidal -> line (u = x/y),
    acnodal -> circle (turns, via the unit-circle embedding).
    """
    if kind not in SINGULAR_KINDS:
        raise DomainError(f"unknown singular kind {kind!r}")
    if direction == "to-curve":
        return _singular_to_curve(kind, value)
    if direction == "to-group":
        return _singular_to_group(kind, value)
    raise DomainError(f"unknown direction {direction!r}")


def _as_element(kind: str, value) -> GroupElement:
    ambient = {"nodal": "split", "cuspidal": "line", "acnodal": "circle"}[kind]
    if isinstance(value, GroupElement):
        if value.ambient != ambient:
            raise DomainError(f"{kind} parametrization lives in {ambient}")
        return value
    return GroupElement(ambient, Fraction(value))


def _singular_to_curve(kind: str, value) -> ProjPoint:
    e = _as_element(kind, value)
    if kind == "nodal":
        if e.value == 1:
            return point(0, 1, 0)
        t = (1 + e.value) / (1 - e.value)
        return nodal_point(t)
    if kind == "cuspidal":
        return cuspidal_point(e.value)
    return acnodal_point(e.value)


def _singular_to_group(kind: str, p: ProjPoint) -> GroupElement:
    if kind == "nodal":
        if not p.is_rational:
            raise NonRationalInput("nodal points are rational")
        xh, yh, zh = (Fraction(v) for v in p.ikey)
        if zh == 0:
            if xh != 0:
                raise OffCurve("only [0,1,0] lies at infinity")
            return GroupElement("split", Fraction(1))
        x, y = xh / zh, yh / zh
        if y * y != x * x * (x + 1):
            raise OffCurve("not on y^2 = x^2 (x+1)")
        if x == 0:
            raise SingularPoint("the node has no group value")
        return GroupElement("split", (y - x) / (y + x))
    if kind == "cuspidal":
        if not p.is_rational:
            raise NonRationalInput("cuspidal points are rational")
        xh, yh, zh = (Fraction(v) for v in p.ikey)
        if zh == 0:
            if xh != 0:
                raise OffCurve("only [0,1,0] lies at infinity")
            return GroupElement("line", Fraction(0))
        x, y = xh / zh, yh / zh
        if y * y != x**3:
            raise OffCurve("not on y^2 = x^3")
        if x == 0:
            raise SingularPoint("the cusp has no group value")
        return GroupElement("line", x / y)
    return _acnodal_to_group(p)


def _acnodal_to_group(p: ProjPoint) -> GroupElement:
    """Invert the acnodal embedding exactly: s = -(x+iy)^2 / x^3 equals
    exp(-2 pi i turns) and is identified as a root of unity in the
    cyclotomic field carrying the coordinates."""
    if p.is_rational and p.ikey == (0, 1, 0):
        return GroupElement("circle", Fraction(0))
    coords = [scalar_cyc(c) for c in p.coords]
    if any(c is None for c in coords):
        raise DomainError("point lacks an exact cyclotomic handle")
    order = 1
    for c in coords:
        order = math.lcm(order, c.field.order)
    order = math.lcm(order, 4)
    field = CycField(order)
    x, y, z = (c.embed(field) for c in coords)
    if z.is_zero():
        raise OffCurve("only the inflection lies at infinity")
    x, y = x / z, y / z
    if x.is_zero():
        raise SingularPoint("the acnode has no group value")
    lhs = y * y
    rhs = x * x * (x - Fraction(1))
    if not (lhs - rhs).is_zero():
        raise OffCurve("not on y^2 = x^2 (x-1)")
    i_unit = field.root_of_unity(order // 4)
    w = x + i_unit * y
    s = -(w * w) / (x * x * x)
    k = s.as_root_of_unity()
    if k is None:
        raise DomainError("point is not on a rational-turns coset")
    return GroupElement("circle", Fraction(-k, field.order) % 1)


def singular_collinear_rule(kind: str, elems: Sequence[GroupElement]) -> bool:
    """Three smooth points are collinear iff the group sum is the identity."""
    return zero_sum(elems)


# -- conic + line quasi-group -------------------------------------------------------


@dataclass(frozen=True)
class ConicLineSystem:
    """The quasi-group on an irreducible conic and a line in normal form.

    secant:   parabola y = x^2 with the line x = 0 (two intersections);
              ambient split, psi_s(s) = [s, s^2, 1], psi_l(s) = [0, -1/s, 1].
    tangent:  parabola y = x^2 with the line at infinity (one intersection);
              ambient line, psi_s(u) = [u, u^2, 1], psi_l(u) = [1, -u, 0].
    disjoint: unit circle with the line at infinity (no intersection);
              ambient circle, psi_s(t) = [cos 2 pi t, sin 2 pi t, 1],
              psi_l(t) = [sin pi t, cos pi t, 0].
    Two conic points and one line point are collinear exactly when the
    three elements sum to the identity.
    """

    case: str

    def __post_init__(self):
        if self.case not in ("secant", "tangent", "disjoint"):
            raise UnnormalizedInput(f"unknown case {self.case!r}")

    @property
    def ambient(self) -> str:
        return {"secant": "split", "tangent": "line", "disjoint": "circle"}[self.case]

    def element(self, value) -> GroupElement:
        return GroupElement(self.ambient, Fraction(value))

    def psi_sigma(self, e: GroupElement) -> ProjPoint:
        e = self._check(e)
        if self.case == "secant" or self.case == "tangent":
            v = e.value
            return point(v, v * v, 1)
        from .families import circle_point

        return circle_point(e.value)

    def psi_ell(self, e: GroupElement) -> ProjPoint:
        e = self._check(e)
        if self.case == "secant":
            return point(0, -1 / e.value, 1)
        if self.case == "tangent":
            return point(1, -e.value, 0)
        from .families import infinity_point

        return infinity_point(-e.value)

    def _check(self, e: GroupElement) -> GroupElement:
        if e.ambient != self.ambient:
            raise DomainError(f"{self.case} case lives in ambient {self.ambient}")
        return e

    def collinear_rule(self, x: GroupElement, y: GroupElement, z: GroupElement) -> bool:
        return zero_sum([self._check(x), self._check(y), self._check(z)])

    def conic_form(self) -> tuple:
        """Quadratic form coefficients (x2, xy, y2, xz, yz, z2)."""
        if self.case in ("secant", "tangent"):
            return (1, 0, 0, 0, -1, 0)  # x^2 - yz
        return (1, 0, 1, 0, 0, -1)  # x^2 + y^2 - z^2

    def line_form(self) -> tuple:
        if self.case == "secant":
            return (1, 0, 0)
        return (0, 0, 1)


def quasigroup_for(conic6: Sequence, line3: Sequence) -> ConicLineSystem:
    """Identify the normal-form pair, or reject with UnnormalizedInput."""

    def canon(vec):
        vec = [Fraction(v) for v in vec]
        for v in vec:
            if v:
                return tuple(x / v for x in vec)
        raise UnnormalizedInput("zero form")

    c, l = canon(conic6), canon(line3)
    for case in ("secant", "tangent", "disjoint"):
        sys = ConicLineSystem(case)
        if c == canon(sys.conic_form()) and l == canon(sys.line_form()):
            return sys
    raise UnnormalizedInput("conic/line pair is not in a supported normal form")
