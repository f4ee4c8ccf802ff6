"""Homogeneous points, lines, transforms, and the core sign predicates.

Rational triples are canonicalized to coprime integers with the first
nonzero entry positive, so equality and line-grouping reduce to tuple
comparison.  Symbolic triples keep their scalars and all predicates go
through the certified sign protocol.
"""

from __future__ import annotations

import math
from fractions import Fraction

from .errors import IdenticalLines, IdenticalPoints, ZeroTriple
from .intervals import (
    DEFAULT_PRECISION_CAP,
    DEFAULT_START_PRECISION,
    CertValue,
    certified_sign,
)
from .scalars import (
    Scalar,
    as_scalar,
    is_rational,
    s_add,
    s_mul,
    s_neg,
    s_sub,
    scalar_cert,
    scalar_float,
    scalar_sign,
)


def _canonical_int_triple(fracs: tuple[Fraction, ...]) -> tuple[int, ...]:
    if all(f == 0 for f in fracs):
        raise ZeroTriple("homogeneous triple must not vanish")
    den = 1
    for f in fracs:
        den = math.lcm(den, f.denominator)
    ints = [int(f * den) for f in fracs]
    g = math.gcd(*ints)
    ints = [v // g for v in ints]
    for v in ints:
        if v:
            if v < 0:
                ints = [-w for w in ints]
            break
    return tuple(ints)


class _Triple:
    """Shared storage for points and lines: three scalars, plus a canonical
    integer key when all coordinates are rational."""

    __slots__ = ("coords", "ikey")

    def __init__(self, coords, check: bool = True):
        coords = tuple(as_scalar(c) for c in coords)
        if len(coords) != 3:
            raise ValueError("need exactly three homogeneous coordinates")
        if all(is_rational(c) for c in coords):
            ikey = _canonical_int_triple(coords)
            coords = tuple(Fraction(v) for v in ikey)
        else:
            ikey = None
            if check and not self._some_coord_nonzero(coords):
                raise ZeroTriple("homogeneous triple must not vanish")
        object.__setattr__(self, "coords", coords)
        object.__setattr__(self, "ikey", ikey)

    @staticmethod
    def _some_coord_nonzero(coords) -> bool:
        order = sorted(range(3), key=lambda i: -abs(scalar_float(coords[i])))
        return any(scalar_sign(coords[i]) != 0 for i in order)

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    @property
    def is_rational(self) -> bool:
        return self.ikey is not None

    def __eq__(self, other):
        if type(other) is not type(self):
            return NotImplemented
        if self.ikey is not None and other.ikey is not None:
            return self.ikey == other.ikey
        return equivalent(self, other)

    def __hash__(self):
        if self.ikey is not None:
            return hash((type(self).__name__, self.ikey))
        return hash(type(self).__name__)

    def __repr__(self):
        inner = ", ".join(
            str(c) if isinstance(c, Fraction) else repr(c) for c in self.coords
        )
        return f"{type(self).__name__}[{inner}]"


class ProjPoint(_Triple):
    pass


class ProjLine(_Triple):
    pass


def point(x, y, z) -> ProjPoint:
    return ProjPoint((x, y, z))


def line(a, b, c) -> ProjLine:
    return ProjLine((a, b, c))


def affine_point(x, y) -> ProjPoint:
    return ProjPoint((x, y, 1))


# -- raw coordinate helpers ---------------------------------------------------


def cross_coords(u, v) -> tuple[Scalar, Scalar, Scalar]:
    return (
        s_sub(s_mul(u[1], v[2]), s_mul(u[2], v[1])),
        s_sub(s_mul(u[2], v[0]), s_mul(u[0], v[2])),
        s_sub(s_mul(u[0], v[1]), s_mul(u[1], v[0])),
    )


def _int_cross(u, v):
    return (
        u[1] * v[2] - u[2] * v[1],
        u[2] * v[0] - u[0] * v[2],
        u[0] * v[1] - u[1] * v[0],
    )


def _det3_int(a, b, c) -> int:
    return (
        a[0] * (b[1] * c[2] - b[2] * c[1])
        - a[1] * (b[0] * c[2] - b[2] * c[0])
        + a[2] * (b[0] * c[1] - b[1] * c[0])
    )


def _cert_dot(u, v, prec) -> CertValue:
    acc = None
    for a, b in zip(u, v):
        term = scalar_cert(a, prec) * scalar_cert(b, prec)
        acc = term if acc is None else acc + term
    return acc


def _cert_det3(rows, prec) -> CertValue:
    a, b, c = rows
    (a0, a1, a2) = (scalar_cert(s, prec) for s in a)
    (b0, b1, b2) = (scalar_cert(s, prec) for s in b)
    (c0, c1, c2) = (scalar_cert(s, prec) for s in c)
    return (
        a0 * (b1 * c2 - b2 * c1)
        - a1 * (b0 * c2 - b2 * c0)
        + a2 * (b0 * c1 - b1 * c0)
    )


def det3_sign(
    p: _Triple,
    q: _Triple,
    r: _Triple,
    start_prec: int = DEFAULT_START_PRECISION,
    cap: int = DEFAULT_PRECISION_CAP,
) -> int:
    if p.ikey is not None and q.ikey is not None and r.ikey is not None:
        d = _det3_int(p.ikey, q.ikey, r.ikey)
        return (d > 0) - (d < 0)
    rows = (p.coords, q.coords, r.coords)
    return certified_sign(lambda prec: _cert_det3(rows, prec), start_prec, cap)


def incidence_sign(
    p: _Triple,
    l: _Triple,
    start_prec: int = DEFAULT_START_PRECISION,
    cap: int = DEFAULT_PRECISION_CAP,
) -> int:
    if p.ikey is not None and l.ikey is not None:
        d = sum(a * b for a, b in zip(p.ikey, l.ikey))
        return (d > 0) - (d < 0)
    return certified_sign(
        lambda prec: _cert_dot(p.coords, l.coords, prec), start_prec, cap
    )


# -- the public predicates ----------------------------------------------------


def collinear(p: ProjPoint, q: ProjPoint, r: ProjPoint, **kw) -> bool:
    """det[p; q; r] == 0, decided exactly (rational) or by certified sign."""
    return det3_sign(p, q, r, **kw) == 0


def concurrent(l1: ProjLine, l2: ProjLine, l3: ProjLine, **kw) -> bool:
    return det3_sign(l1, l2, l3, **kw) == 0


def incident(p: ProjPoint, l: ProjLine, **kw) -> bool:
    return incidence_sign(p, l, **kw) == 0


def equivalent(a: _Triple, b: _Triple) -> bool:
    """Projective equality: the cross product vanishes."""
    if a.ikey is not None and b.ikey is not None:
        return a.ikey == b.ikey
    cross = cross_coords(a.coords, b.coords)
    order = sorted(range(3), key=lambda i: -abs(scalar_float(cross[i])))
    return all(scalar_sign(cross[i]) == 0 for i in order)


def join(p: ProjPoint, q: ProjPoint) -> ProjLine:
    """The line through two distinct points (cross product)."""
    if p.ikey is not None and q.ikey is not None:
        c = _int_cross(p.ikey, q.ikey)
        if c == (0, 0, 0):
            raise IdenticalPoints(f"join of equal points {p}")
        return ProjLine(c)
    try:
        return ProjLine(cross_coords(p.coords, q.coords))
    except ZeroTriple:
        raise IdenticalPoints(f"join of equal points {p}") from None


def meet(l1: ProjLine, l2: ProjLine) -> ProjPoint:
    """The point on two distinct lines (dual of join)."""
    if l1.ikey is not None and l2.ikey is not None:
        c = _int_cross(l1.ikey, l2.ikey)
        if c == (0, 0, 0):
            raise IdenticalLines(f"meet of equal lines {l1}")
        return ProjPoint(c)
    try:
        return ProjPoint(cross_coords(l1.coords, l2.coords))
    except ZeroTriple:
        raise IdenticalLines(f"meet of equal lines {l1}") from None


def dualize(x: _Triple) -> _Triple:
    """[a,b,c] <-> {ax+by+cz=0}; an incidence-preserving involution."""
    if isinstance(x, ProjPoint):
        return ProjLine(x.coords, check=False)
    return ProjPoint(x.coords, check=False)


def nonzero_coord_index(t: _Triple) -> int:
    """Index of a certified-nonzero coordinate (largest float first)."""
    if t.ikey is not None:
        return max(range(3), key=lambda i: abs(t.ikey[i]))
    order = sorted(range(3), key=lambda i: -abs(scalar_float(t.coords[i])))
    for i in order:
        if scalar_sign(t.coords[i]) != 0:
            return i
    raise ZeroTriple("all coordinates vanish")


# -- projective transforms ----------------------------------------------------


class ProjTransform:
    """An invertible 3x3 matrix of scalars acting on points; determinant
    nonzero is certified at construction."""

    __slots__ = ("rows",)

    def __init__(self, rows, check: bool = True):
        rows = tuple(tuple(as_scalar(x) for x in row) for row in rows)
        if len(rows) != 3 or any(len(r) != 3 for r in rows):
            raise ValueError("transform needs a 3x3 matrix")
        object.__setattr__(self, "rows", rows)
        if check and self.det_sign() == 0:
            raise ValueError("transform matrix is singular")

    def __setattr__(self, *a):
        raise AttributeError("immutable")

    @property
    def is_rational(self) -> bool:
        return all(is_rational(x) for row in self.rows for x in row)

    def det_sign(self) -> int:
        if self.is_rational:
            d = _det3_int(
                *[
                    tuple(Fraction(x) for x in row)  # exact Fraction determinant
                    for row in self.rows
                ]
            )
            return (d > 0) - (d < 0)
        return certified_sign(lambda prec: _cert_det3(self.rows, prec))

    @staticmethod
    def identity() -> "ProjTransform":
        return ProjTransform(((1, 0, 0), (0, 1, 0), (0, 0, 1)), check=False)

    def apply_point(self, p: ProjPoint) -> ProjPoint:
        out = []
        for row in self.rows:
            acc = None
            for m, c in zip(row, p.coords):
                term = s_mul(m, c)
                acc = term if acc is None else s_add(acc, term)
            out.append(acc)
        return ProjPoint(out)

    def compose(self, other: "ProjTransform") -> "ProjTransform":
        """self after other (matrix product self @ other)."""
        rows = []
        for i in range(3):
            row = []
            for j in range(3):
                acc = None
                for k in range(3):
                    term = s_mul(self.rows[i][k], other.rows[k][j])
                    acc = term if acc is None else s_add(acc, term)
                row.append(acc)
            rows.append(tuple(row))
        return ProjTransform(rows, check=False)

    def inverse(self) -> "ProjTransform":
        """Projective inverse via the adjugate (scale is irrelevant)."""
        r = self.rows

        def cof(i, j):
            ii = [k for k in range(3) if k != i]
            jj = [k for k in range(3) if k != j]
            a = s_mul(r[ii[0]][jj[0]], r[ii[1]][jj[1]])
            b = s_mul(r[ii[0]][jj[1]], r[ii[1]][jj[0]])
            m = s_sub(a, b)
            return m if (i + j) % 2 == 0 else s_neg(m)

        rows = tuple(tuple(cof(j, i) for j in range(3)) for i in range(3))
        return ProjTransform(rows, check=False)

    def __repr__(self):
        return f"ProjTransform({self.rows!r})"
