"""Chord-multiplicity experiment on the regular n-gon.

All C(n,2) supporting lines of chords between n-th roots of unity are
intersected pairwise; affine intersection points other than the origin and
the vertices are grouped by identity (symbolic index keys with float
bucketing, every multi-member group confirmed by certified equality) and
the maximum number of chord lines through a single point is reported per
region.  Pairs sharing a vertex meet at that vertex, two diameters meet at
the origin, and parallel chords meet at infinity; all three are excluded
by index arithmetic before any geometry runs.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .certsort import cross_sign
from .errors import InvalidParameter
from .families import trig_value
from .intervals import DEFAULT_PRECISION_CAP, DEFAULT_START_PRECISION, certified_sign
from .scalars import Scalar, s_mul, s_neg, s_sub, scalar_cert, scalar_float


@dataclass(frozen=True)
class ChordWitness:
    lines: tuple[tuple[int, int], ...]
    approx: tuple[float, float]

    def to_json_dict(self) -> dict:
        return {"chords": [list(c) for c in self.lines], "xy": list(self.approx)}


@dataclass(frozen=True)
class ChordReport:
    n: int
    region: str
    max_multiplicity: int
    histogram: Mapping[int, int]
    witnesses: tuple[ChordWitness, ...]

    def to_json_dict(self) -> dict:
        return {
            "n": self.n,
            "region": self.region,
            "max": self.max_multiplicity,
            "histogram": {str(k): v for k, v in sorted(self.histogram.items())},
            "max_over_n_5_6": (
                self.max_multiplicity / self.n ** (5 / 6) if self.n else 0.0
            ),
            "witnesses": [w.to_json_dict() for w in self.witnesses],
        }

    def to_csv(self) -> str:
        lines = ["multiplicity,points"]
        for k, v in sorted(self.histogram.items()):
            lines.append(f"{k},{v}")
        return "\n".join(lines) + "\n"


def _chord_coeffs(i: int, j: int, n: int) -> tuple[Scalar, Scalar, Scalar]:
    """The supporting line of the chord between vertices i and j:
    x cos(pi s) + y sin(pi s) = cos(pi d) with s = (i+j)/n, d = (i-j)/n."""
    s = Fraction(i + j, n)
    d = Fraction(i - j, n)
    return (
        trig_value("cos", s),
        trig_value("sin", s),
        s_neg(trig_value("cos", d)),
    )


def _meet2(l1, l2) -> tuple[Scalar, Scalar, Scalar]:
    return (
        s_sub(s_mul(l1[1], l2[2]), s_mul(l1[2], l2[1])),
        s_sub(s_mul(l1[2], l2[0]), s_mul(l1[0], l2[2])),
        s_sub(s_mul(l1[0], l2[1]), s_mul(l1[1], l2[0])),
    )


def _points_equal(p, q, start_prec, cap) -> bool:
    checks = (
        (p[0], p[1], q[0], q[1]),
        (p[0], p[2], q[0], q[2]),
        (p[1], p[2], q[1], q[2]),
    )
    return all(cross_sign(a, b, c, d, start_prec, cap) == 0 for a, b, c, d in checks)


def _interior_sign(p, start_prec, cap) -> int:
    """Sign of x^2 + y^2 - z^2: negative inside the unit circle."""

    def ev(prec):
        x, y, z = (scalar_cert(c, prec) for c in p)
        return x * x + y * y - z * z

    return certified_sign(ev, start_prec, cap)


def ngon_chord_multiplicity(
    n: int,
    region: str = "all",
    start_prec: int = DEFAULT_START_PRECISION,
    cap: int = DEFAULT_PRECISION_CAP,
    witness_limit: int = 5,
) -> ChordReport:
    if not 3 <= n <= 60:
        raise InvalidParameter("chord experiment supports 3 <= n <= 60")
    if region not in ("all", "interior", "exterior"):
        raise InvalidParameter(f"unknown region {region!r}")

    chords = [(i, j) for i in range(n) for j in range(i + 1, n)]
    coeffs = [_chord_coeffs(i, j, n) for (i, j) in chords]
    floats = [tuple(scalar_float(c) for c in line) for line in coeffs]

    # bucket intersections by rounded affine coordinates
    buckets: dict[tuple[int, int], list[tuple[int, int]]] = {}
    L = len(chords)
    for a in range(L):
        ia, ja = chords[a]
        fa = floats[a]
        for b in range(a + 1, L):
            ib, jb = chords[b]
            if ia == ib or ia == jb or ja == ib or ja == jb:
                continue  # meet at a shared vertex
            if (ia + ja) % n == (ib + jb) % n:
                continue  # parallel: meet at infinity
            if 2 * (ja - ia) == n and 2 * (jb - ib) == n:
                continue  # two diameters: meet at the origin
            fb = floats[b]
            z = fa[0] * fb[1] - fa[1] * fb[0]
            x = fa[1] * fb[2] - fa[2] * fb[1]
            y = fa[2] * fb[0] - fa[0] * fb[2]
            key = (round(x / z * 1e7), round(y / z * 1e7))
            buckets.setdefault(key, []).append((a, b))

    histogram: dict[int, int] = {}
    max_mult = 0
    witnesses: list[ChordWitness] = []

    for key in sorted(buckets):
        pair_list = buckets[key]
        line_ids = sorted({i for ab in pair_list for i in ab})
        if len(pair_list) > 1:
            groups = _confirm_groups(coeffs, pair_list, start_prec, cap)
        else:
            groups = [pair_list]
        for grp in groups:
            ids = sorted({i for ab in grp for i in ab})
            t = len(ids)
            if math.comb(t, 2) != len(grp):
                raise AssertionError("incoherent concurrence group")
            rep = _meet2(coeffs[grp[0][0]], coeffs[grp[0][1]])
            if region != "all":
                s = _interior_sign(rep, start_prec, cap)
                if s == 0:
                    raise AssertionError("non-vertex intersection on the circle")
                if (region == "interior") != (s < 0):
                    continue
            histogram[t] = histogram.get(t, 0) + 1
            if t > max_mult:
                max_mult = t
                witnesses = []
            if t == max_mult and len(witnesses) < witness_limit:
                fx = scalar_float(rep[0]) / scalar_float(rep[2])
                fy = scalar_float(rep[1]) / scalar_float(rep[2])
                witnesses.append(
                    ChordWitness(tuple(chords[i] for i in ids), (fx, fy))
                )
    return ChordReport(n, region, max_mult, histogram, tuple(witnesses))


def _lines_concurrent(coeffs, l0, l1, l2, start_prec, cap) -> bool:
    def ev(prec):
        rows = [
            [scalar_cert(c, prec) for c in coeffs[l]] for l in (l0, l1, l2)
        ]
        (a0, a1, a2), (b0, b1, b2), (c0, c1, c2) = rows
        return (
            a0 * (b1 * c2 - b2 * c1)
            - a1 * (b0 * c2 - b2 * c0)
            + a2 * (b0 * c1 - b1 * c0)
        )

    return certified_sign(ev, start_prec, cap) == 0


def _confirm_groups(coeffs, pair_list, start_prec, cap):
    """Certified partition of a float bucket into true concurrence groups.

    If the pair set is a complete graph on t lines and all t lines are
    certified concurrent (t - 2 determinant certificates), the bucket is a
    single t-fold point; otherwise fall back to pairwise equality grouping.
    """
    line_ids = sorted({i for ab in pair_list for i in ab})
    t = len(line_ids)
    if len(pair_list) == math.comb(t, 2):
        l0, l1 = line_ids[0], line_ids[1]
        if all(
            _lines_concurrent(coeffs, l0, l1, lk, start_prec, cap)
            for lk in line_ids[2:]
        ):
            return [pair_list]
    points = [_meet2(coeffs[a], coeffs[b]) for a, b in pair_list]
    groups: list[list[int]] = []
    reps: list = []
    for idx, p in enumerate(points):
        placed = False
        for g, rep in zip(groups, reps):
            if _points_equal(p, rep, start_prec, cap):
                g.append(idx)
                placed = True
                break
        if not placed:
            groups.append([idx])
            reps.append(p)
    return [[pair_list[i] for i in g] for g in groups]
