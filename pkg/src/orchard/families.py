"""Generators for the example families, each with an exact index oracle.

Circle families place M points at the M-th roots of unity plus points on
the line at infinity; the oracle works purely on the index arithmetic
(two circle points at turns a, a' and the infinite point at turn a+a' are
collinear, diameters pass through the origin, tangency doubles an index).
The acnodal families realize finite subgroups/cosets of the smooth points
of y^2 = x^2(x-1) via t = cot(pi*x); collinearity is zero-sum mod 1.
The near-counterexample truncations live on three lines, a cuspidal cubic
or a parabola plus the line at infinity, with the matching additive rules.
"""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Optional

from .errors import InvalidParameter
from .incidence import Configuration, make_configuration
from .projective import ProjPoint, point
from .scalars import Scalar, TrigScalar


def trig_value(fn: str, turns) -> Scalar:
    """cos/sin/cot(pi*turns) as an exact Fraction when rational (Niven's
    theorem cases), else a symbolic trig scalar."""
    turns = Fraction(turns) % 2
    a, b = turns.numerator, turns.denominator
    if fn == "cos":
        if b == 1:
            return Fraction(1 if a % 2 == 0 else -1)
        if b == 2:
            return Fraction(0)
        if b == 3:
            return Fraction(1, 2) if a % 6 in (1, 5) else Fraction(-1, 2)
    elif fn == "sin":
        return trig_value("cos", turns - Fraction(1, 2)) if b in (1, 2, 6) else TrigScalar("sin", turns)
    elif fn == "cot":
        if b == 2:
            return Fraction(0)
        if b == 4:
            return Fraction(1) if a % 8 in (1, 5) else Fraction(-1)
    return TrigScalar(fn, turns)


def circle_point(turns) -> ProjPoint:
    """[cos(2*pi*t), sin(2*pi*t), 1] for t = turns mod 1."""
    t = Fraction(turns) % 1
    return point(trig_value("cos", 2 * t), trig_value("sin", 2 * t), Fraction(1))


def infinity_point(turns) -> ProjPoint:
    """[-sin(pi*t), cos(pi*t), 0]: the direction parametrized mod 1."""
    t = Fraction(turns) % 1
    return point(trig_value("sin", -t), trig_value("cos", t), Fraction(0))


def acnodal_point(turns) -> ProjPoint:
    """Smooth point of y^2 = x^2 (x-1) at group element turns (see cubics)."""
    from .cubics import acnodal_point as _ap

    return _ap(turns)


# -- oracles ------------------------------------------------------------------


class CircleFamilyOracle:
    """Index rules for subsets of {circle points} + {infinite points} + origin."""

    def __init__(self, circle_turns, inf_turns, origin_index):
        self.circle_at = dict(circle_turns)  # turn -> index
        self.inf_at = dict(inf_turns)
        self.turn_of = {}
        self.kind = {}
        for t, i in circle_turns:
            self.turn_of[i] = t
            self.kind[i] = "circle"
        for t, i in inf_turns:
            self.turn_of[i] = t
            self.kind[i] = "infinity"
        self.origin = origin_index
        if origin_index is not None:
            self.kind[origin_index] = "origin"

    def line_members(self, i: int, j: int) -> frozenset[int]:
        ki, kj = self.kind[i], self.kind[j]
        if ki > kj or (ki == kj and i > j):
            i, j, ki, kj = j, i, kj, ki
        members = {i, j}
        if ki == "infinity" and kj == "infinity":
            return frozenset(self.inf_at.values())
        if ki == "circle" and kj == "circle":
            a, b = self.turn_of[i], self.turn_of[j]
            k = self.inf_at.get((a + b) % 1)
            if k is not None:
                members.add(k)
            if self.origin is not None and (b - a) % 1 == Fraction(1, 2):
                members.add(self.origin)
            return frozenset(members)
        if ki == "circle" and kj == "infinity":
            a, tau = self.turn_of[i], self.turn_of[j]
            a2 = (tau - a) % 1
            if a2 == a:  # tangent
                return frozenset(members)
            other = self.circle_at.get(a2)
            if other is not None:
                members.add(other)
            if self.origin is not None and (a2 - a) % 1 == Fraction(1, 2):
                members.add(self.origin)
            return frozenset(members)
        if kj == "origin":
            if ki == "circle":
                a = self.turn_of[i]
                anti = self.circle_at.get((a + Fraction(1, 2)) % 1)
                if anti is not None:
                    members.add(anti)
                k = self.inf_at.get((2 * a + Fraction(1, 2)) % 1)
                if k is not None:
                    members.add(k)
                return frozenset(members)
            # origin with an infinite point: diameters with that direction
            tau = self.turn_of[i]
            for a in self._diameter_solutions(tau):
                c = self.circle_at.get(a)
                if c is not None:
                    members.add(c)
            return frozenset(members)
        raise AssertionError("unreachable kind pair")

    def _diameter_solutions(self, tau: Fraction):
        # alpha with 2*alpha + 1/2 == tau (mod 1): two solutions mod 1
        base = (tau - Fraction(1, 2)) / 2
        return [base % 1, (base + Fraction(1, 2)) % 1]


class ZeroSumOracle:
    """Collinearity as zero-sum mod 1 on an acnodal coset (with an optional
    fixed offset so that shifted cosets sum to 3*shift)."""

    def __init__(self, values: list[Fraction]):
        self.values = values
        self.index = {v: i for i, v in enumerate(values)}

    def line_members(self, i: int, j: int) -> frozenset[int]:
        third = (-(self.values[i] + self.values[j])) % 1
        k = self.index.get(third)
        if k is None or k == i or k == j:
            return frozenset((i, j))
        return frozenset((i, j, k))


class ThreeLinesOracle:
    """x1 + x3 == 2*x2 on the rows y = 0, 1, 2 (near-counterexample on
    three parallel lines)."""

    def __init__(self, rows: list[tuple[int, Fraction]]):
        # rows: list of (row_id 0|1|2, x) per point index
        self.rows = rows
        self.index = {pair: i for i, pair in enumerate(rows)}
        self.by_row: dict[int, list[int]] = {0: [], 1: [], 2: []}
        for i, (r, _) in enumerate(rows):
            self.by_row[r].append(i)

    def line_members(self, i: int, j: int) -> frozenset[int]:
        (ri, xi), (rj, xj) = self.rows[i], self.rows[j]
        if ri == rj:
            return frozenset(self.by_row[ri])
        (ri, xi), (rj, xj) = sorted(((ri, xi), (rj, xj)))
        members = {i, j}
        if (ri, rj) == (0, 1):
            other = self.index.get((2, 2 * xj - xi))
        elif (ri, rj) == (0, 2):
            other = self.index.get((1, (xi + xj) / 2))
        else:  # (1, 2)
            other = self.index.get((0, 2 * xi - xj))
        if other is not None:
            members.add(other)
        return frozenset(members)


class TriangleExponentOracle:
    """a = b + c on the lines y=0, x=0, z=0 carrying 2**a, 2**b, -2**c."""

    def __init__(self, rows: list[tuple[int, int]]):
        self.rows = rows
        self.index = {pair: i for i, pair in enumerate(rows)}
        self.by_row: dict[int, list[int]] = {0: [], 1: [], 2: []}
        for i, (r, _) in enumerate(rows):
            self.by_row[r].append(i)

    def line_members(self, i: int, j: int) -> frozenset[int]:
        (ri, ei), (rj, ej) = self.rows[i], self.rows[j]
        if ri == rj:
            return frozenset(self.by_row[ri])
        (ri, ei), (rj, ej) = sorted(((ri, ei), (rj, ej)))
        members = {i, j}
        if (ri, rj) == (0, 1):
            other = self.index.get((2, ei - ej))
        elif (ri, rj) == (0, 2):
            other = self.index.get((1, ei - ej))
        else:  # (1, 2)
            other = self.index.get((0, ei + ej))
        if other is not None:
            members.add(other)
        return frozenset(members)


class CuspidalSumOracle:
    """t1 + t2 + t3 == 0 on the cuspidal cubic points [t, t^3, 1]."""

    def __init__(self, values: list[int]):
        self.values = values
        self.index = {v: i for i, v in enumerate(values)}

    def line_members(self, i: int, j: int) -> frozenset[int]:
        third = -(self.values[i] + self.values[j])
        k = self.index.get(third)
        if k is None or k == i or k == j:
            return frozenset((i, j))
        return frozenset((i, j, k))


class ParabolaSumOracle:
    """t3 = t1 + t2 between parabola points [t, t^2, 1] and directions
    [1, t3, 0]; the line at infinity holds all the direction points."""

    def __init__(self, parab: list[int], inf: list[int], offset: int):
        self.parab_index = {v: i for i, v in enumerate(parab)}
        self.inf_index = {v: offset + i for i, v in enumerate(inf)}
        self.parab = parab
        self.inf = inf
        self.offset = offset

    def _is_inf(self, i: int) -> bool:
        return i >= self.offset

    def line_members(self, i: int, j: int) -> frozenset[int]:
        if self._is_inf(i) and self._is_inf(j):
            return frozenset(self.inf_index.values())
        members = {i, j}
        if not self._is_inf(i) and not self._is_inf(j):
            t3 = self.parab[i] + self.parab[j]
            k = self.inf_index.get(t3)
            if k is not None:
                members.add(k)
            return frozenset(members)
        if self._is_inf(i):
            i, j = j, i
        t1 = self.parab[i]
        u = self.inf[j - self.offset]
        t2 = u - t1
        if t2 != t1:
            k = self.parab_index.get(t2)
            if k is not None:
                members.add(k)
        return frozenset(members)


# -- family specs and dispatch --------------------------------------------------

FAMILIES = (
    "boroczky-base",
    "boroczky-plus-origin",
    "boroczky-minus-pole",
    "boroczky-odd-minus-infinity",
    "near-boroczky",
    "sylvester-acnodal",
    "near-ce-p1",
    "near-ce-p2",
    "near-ce-p3",
    "near-ce-p4",
    "kelly-moser",
    "square-grid",
    "random-rational",
)


@dataclass(frozen=True)
class FamilySpec:
    """family plus its size parameter: m for the circle families, n for
    sylvester-acnodal, truncation radius N for near-ce-p1..p4, side length
    for square-grid, point count for random-rational."""

    family: str
    size: int = 0
    shift: Optional[Fraction] = None
    seed: Optional[int] = None
    box: int = 15

    def __post_init__(self):
        if self.family not in FAMILIES:
            raise InvalidParameter(f"unknown family {self.family!r}")

    def to_json_dict(self) -> dict:
        out = {"family": self.family, "size": self.size}
        if self.shift is not None:
            out["shift"] = str(self.shift)
        if self.seed is not None:
            out["seed"] = self.seed
        if self.family == "random-rational":
            out["box"] = self.box
        return out


def generate(spec: FamilySpec) -> Configuration:
    fam = spec.family
    if fam.startswith("boroczky") or fam == "near-boroczky":
        return _generate_circle_family(spec)
    if fam == "sylvester-acnodal":
        return _generate_sylvester(spec)
    if fam == "near-ce-p1":
        return _generate_p1(spec)
    if fam == "near-ce-p2":
        return _generate_p2(spec)
    if fam == "near-ce-p3":
        return _generate_p3(spec)
    if fam == "near-ce-p4":
        return _generate_p4(spec)
    if fam == "kelly-moser":
        return kelly_moser()
    if fam == "square-grid":
        return square_grid(spec.size)
    if fam == "random-rational":
        return random_rational(spec.size, spec.seed or 0, spec.box)
    raise InvalidParameter(f"unknown family {fam!r}")


def _generate_circle_family(spec: FamilySpec) -> Configuration:
    m = spec.size
    fam = spec.family
    # the odd family at m = 2 is the 9-point example on X_10
    if m < (2 if fam == "boroczky-odd-minus-infinity" else 3):
        raise InvalidParameter("circle families need m >= 3")
    if fam == "boroczky-base":
        big_m, removed, origin = m, (), False
    elif fam == "boroczky-plus-origin":
        big_m, removed, origin = 2 * m, (), True
    elif fam == "boroczky-minus-pole":
        big_m, removed, origin = 2 * m, (0,), False
    elif fam == "boroczky-odd-minus-infinity":
        big_m, removed, origin = 2 * m + 1, (0,), False
    elif fam == "near-boroczky":
        big_m, removed, origin = 2 * m, (1,), False
    else:
        raise InvalidParameter(fam)
    points: list[ProjPoint] = []
    circle_turns = []
    inf_turns = []
    for j in range(big_m):
        circle_turns.append((Fraction(j, big_m), len(points)))
        points.append(circle_point(Fraction(j, big_m)))
    for k in range(big_m):
        if k in removed:
            continue
        inf_turns.append((Fraction(k, big_m), len(points)))
        points.append(infinity_point(Fraction(k, big_m)))
    origin_index = None
    if origin:
        origin_index = len(points)
        points.append(point(0, 0, 1))
    oracle = CircleFamilyOracle(circle_turns, inf_turns, origin_index)
    meta = {"family": fam, "m": m, "circle_points": big_m}
    return make_configuration(points, oracle, meta, check_distinct=False)


def _generate_sylvester(spec: FamilySpec) -> Configuration:
    n = spec.size
    if n < 3:
        raise InvalidParameter("sylvester-acnodal needs n >= 3")
    shift = Fraction(spec.shift) % 1 if spec.shift is not None else Fraction(0)
    if (3 * shift * n).denominator != 1:
        raise InvalidParameter("coset shift must satisfy 3*shift in H")
    values = [(shift + Fraction(j, n)) % 1 for j in range(n)]
    points = [acnodal_point(v) for v in values]
    oracle = ZeroSumOracle(values)
    meta = {"family": "sylvester-acnodal", "n": n, "shift": str(shift)}
    return make_configuration(points, oracle, meta, check_distinct=False)


def _generate_p1(spec: FamilySpec) -> Configuration:
    N = spec.size
    if N < 1:
        raise InvalidParameter("truncation radius must be >= 1")
    rows: list[tuple[int, Fraction]] = []
    points = []
    for a in range(-N, N + 1):
        rows.append((0, Fraction(a)))
        points.append(point(a, 0, 1))
    for h in range(-2 * N, 2 * N + 1):
        rows.append((1, Fraction(h, 2)))
        points.append(point(Fraction(h, 2), 1, 1))
    for c in range(-N, N + 1):
        rows.append((2, Fraction(c)))
        points.append(point(c, 2, 1))
    oracle = ThreeLinesOracle(rows)
    meta = {"family": "near-ce-p1", "radius": N}
    return make_configuration(points, oracle, meta, check_distinct=False)


def _generate_p2(spec: FamilySpec) -> Configuration:
    N = spec.size
    if N < 1:
        raise InvalidParameter("truncation radius must be >= 1")
    rows: list[tuple[int, int]] = []
    points = []
    for a in range(-N, N + 1):
        rows.append((0, a))
        points.append(point(Fraction(2) ** a, 0, 1))
    for b in range(-N, N + 1):
        rows.append((1, b))
        points.append(point(0, Fraction(2) ** b, 1))
    for c in range(-N, N + 1):
        rows.append((2, c))
        points.append(point(-(Fraction(2) ** c), 1, 0))
    oracle = TriangleExponentOracle(rows)
    meta = {"family": "near-ce-p2", "radius": N}
    return make_configuration(points, oracle, meta, check_distinct=False)


def _generate_p3(spec: FamilySpec) -> Configuration:
    N = spec.size
    if N < 1:
        raise InvalidParameter("truncation radius must be >= 1")
    values = list(range(-N, N + 1))
    points = [point(t, t**3, 1) for t in values]
    meta = {"family": "near-ce-p3", "radius": N}
    return make_configuration(points, CuspidalSumOracle(values), meta, check_distinct=False)


def _generate_p4(spec: FamilySpec) -> Configuration:
    N = spec.size
    if N < 1:
        raise InvalidParameter("truncation radius must be >= 1")
    parab = list(range(-N, N + 1))
    inf = list(range(-N, N + 1))
    points = [point(t, t**2, 1) for t in parab]
    offset = len(points)
    points += [point(1, u, 0) for u in inf]
    oracle = ParabolaSumOracle(parab, inf, offset)
    meta = {"family": "near-ce-p4", "radius": N}
    return make_configuration(points, oracle, meta, check_distinct=False)


def kelly_moser() -> Configuration:
    """Triangle, its midpoints, and the centroid: 7 points, 3 ordinary
    lines, 6 three-rich lines."""
    pts = [
        point(0, 0, 1),
        point(2, 0, 1),
        point(0, 2, 1),
        point(1, 0, 1),
        point(0, 1, 1),
        point(1, 1, 1),
        point(Fraction(2, 3), Fraction(2, 3), 1),
    ]
    return make_configuration(pts, None, {"family": "kelly-moser"}, check_distinct=False)


def square_grid(side: int) -> Configuration:
    if side < 2:
        raise InvalidParameter("square grid side must be >= 2")
    pts = [point(i, j, 1) for i in range(side) for j in range(side)]
    return make_configuration(pts, None, {"family": "square-grid", "side": side}, check_distinct=False)


def random_rational(n: int, seed: int, box: int = 15) -> Configuration:
    """n distinct integer points drawn uniformly from [-box, box]^2."""
    if n < 2:
        raise InvalidParameter("need at least 2 points")
    if (2 * box + 1) ** 2 < n:
        raise InvalidParameter("box too small for requested point count")
    rng = random.Random(seed)
    seen: set[tuple[int, int]] = set()
    while len(seen) < n:
        seen.add((rng.randint(-box, box), rng.randint(-box, box)))
    pts = [point(x, y, 1) for x, y in sorted(seen)]
    meta = {"family": "random-rational", "n": n, "seed": seed, "box": box}
    return make_configuration(pts, None, meta, check_distinct=False)


# -- perturbation ----------------------------------------------------------------


def perturb(
    config: Configuration,
    add: list[ProjPoint] = (),
    remove: list[int] = (),
) -> Configuration:
    """Add/remove points; the symbolic oracle no longer covers the result
    and is dropped (predicates fall back to the geometric paths)."""
    remove_set = set(remove)
    if any(i < 0 or i >= len(config) for i in remove_set):
        raise IndexError("remove index out of range")
    kept = [p for i, p in enumerate(config.points) if i not in remove_set]
    new_points = kept + list(add)
    meta = dict(config.meta)
    meta["perturbed"] = {"added": len(add), "removed": len(remove_set)}
    oracle = config.oracle if not add and not remove_set else None
    return make_configuration(new_points, oracle, meta, check_distinct=True)
