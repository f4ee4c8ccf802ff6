"""Certified angular sorting and grouping of planar directions.

Directions are (a, b) scalar pairs up to positive scaling (mod 2*pi) or up
to any nonzero scaling (mod pi).  Rational pairs group by canonical integer
keys and sort with exact cross products.  Symbolic pairs sort by float
angle first; every adjacency in the proposed order is then validated with
a certified cross-product sign, falling back to a fully certified
comparison sort if the float proposal is contradicted.
"""

from __future__ import annotations

import functools
import math
from fractions import Fraction

from .intervals import DEFAULT_PRECISION_CAP, DEFAULT_START_PRECISION
from .scalars import Scalar, scalar_cert, scalar_float, scalar_sign


def _cross_sign_exact(a1, b1, a2, b2) -> int:
    d = a1 * b2 - b1 * a2
    return (d > 0) - (d < 0)


def _cross_sign_cert(a1, b1, a2, b2, start_prec, cap) -> int:
    from .intervals import certified_sign

    def ev(prec):
        return scalar_cert(a1, prec) * scalar_cert(b2, prec) - scalar_cert(
            b1, prec
        ) * scalar_cert(a2, prec)

    return certified_sign(ev, start_prec, cap)


_EXACT = (int, Fraction)


def cross_sign(a1, b1, a2, b2, start_prec=DEFAULT_START_PRECISION, cap=DEFAULT_PRECISION_CAP) -> int:
    if (
        isinstance(a1, _EXACT)
        and isinstance(b1, _EXACT)
        and isinstance(a2, _EXACT)
        and isinstance(b2, _EXACT)
    ):
        return _cross_sign_exact(a1, b1, a2, b2)
    return _cross_sign_cert(a1, b1, a2, b2, start_prec, cap)


class _Dir:
    __slots__ = ("idx", "a", "b", "cls", "angle")

    def __init__(self, idx, a, b, cls, angle):
        self.idx = idx
        self.a = a
        self.b = b
        self.cls = cls  # 0: upper half-plane (b>0, or b==0 and a>0); 1: lower
        self.angle = angle


def _scalar_sign(x, start_prec, cap) -> int:
    if isinstance(x, _EXACT):
        return (x > 0) - (x < 0)
    return scalar_sign(x, start_prec, cap)


def _classify(idx, a, b, mod_pi, start_prec, cap):
    """Build a _Dir, flipping to the upper half-plane when working mod pi."""
    sb = _scalar_sign(b, start_prec, cap)
    if sb == 0:
        sa = _scalar_sign(a, start_prec, cap)
        if sa == 0:
            raise ValueError("zero direction vector")
        cls = 0 if sa > 0 else 1
    else:
        cls = 0 if sb > 0 else 1
    if mod_pi and cls == 1:
        from .scalars import s_neg

        a = -a if isinstance(a, _EXACT) else s_neg(a)
        b = -b if isinstance(b, _EXACT) else s_neg(b)
        cls = 0
    fa, fb = _to_float(a), _to_float(b)
    angle = math.atan2(fb, fa) % math.pi if mod_pi else math.atan2(fb, fa) % (2 * math.pi)
    return _Dir(idx, a, b, cls, angle)


def _to_float(x) -> float:
    if isinstance(x, _EXACT):
        return float(x)
    return scalar_float(x)


def _cmp_dirs(u: _Dir, v: _Dir, start_prec, cap) -> int:
    if u.cls != v.cls:
        return -1 if u.cls < v.cls else 1
    # same half-plane: ccw order by cross sign
    return -cross_sign(u.a, u.b, v.a, v.b, start_prec, cap)


def direction_groups(
    pairs: list[tuple[Scalar, Scalar]],
    mod_pi: bool,
    start_prec: int = DEFAULT_START_PRECISION,
    cap: int = DEFAULT_PRECISION_CAP,
) -> list[list[int]]:
    """Group indices of equal directions, returned in angular order.

    mod_pi treats (a, b) and (-a, -b) as the same direction (pencils of
    lines); otherwise directions live on the full circle.
    """
    if not pairs:
        return []
    if all(isinstance(a, _EXACT) and isinstance(b, _EXACT) for a, b in pairs):
        return _rational_groups(pairs, mod_pi)

    dirs = [
        _classify(i, a, b, mod_pi, start_prec, cap) for i, (a, b) in enumerate(pairs)
    ]
    dirs.sort(key=lambda d: (d.cls, d.angle))
    groups: list[list[_Dir]] = [[dirs[0]]]
    ok = True
    for prev, cur in zip(dirs, dirs[1:]):
        c = _cmp_dirs(prev, cur, start_prec, cap)
        if c == 0:
            groups[-1].append(cur)
        elif c < 0:
            groups.append([cur])
        else:
            ok = False
            break
    if not ok:
        # float order contradicted: sort fully certified
        key = functools.cmp_to_key(lambda u, v: _cmp_dirs(u, v, start_prec, cap))
        dirs.sort(key=key)
        groups = [[dirs[0]]]
        for prev, cur in zip(dirs, dirs[1:]):
            if _cmp_dirs(prev, cur, start_prec, cap) == 0:
                groups[-1].append(cur)
            else:
                groups.append([cur])
    return [[d.idx for d in g] for g in groups]


def _rational_groups(pairs, mod_pi) -> list[list[int]]:
    def canon(a, b):
        den = math.lcm(a.denominator, b.denominator)
        ia, ib = int(a * den), int(b * den)
        g = math.gcd(ia, ib)
        ia, ib = ia // g, ib // g
        flipped = False
        if mod_pi and (ib < 0 or (ib == 0 and ia < 0)):
            ia, ib = -ia, -ib
            flipped = True
        return (ia, ib), flipped

    buckets: dict[tuple[int, int], list[int]] = {}
    for i, (a, b) in enumerate(pairs):
        if a == 0 and b == 0:
            raise ValueError("zero direction vector")
        key, _ = canon(a, b)
        buckets.setdefault(key, []).append(i)

    def cmp_keys(k1, k2):
        c1 = 0 if (k1[1] > 0 or (k1[1] == 0 and k1[0] > 0)) else 1
        c2 = 0 if (k2[1] > 0 or (k2[1] == 0 and k2[0] > 0)) else 1
        if c1 != c2:
            return -1 if c1 < c2 else 1
        d = k1[0] * k2[1] - k1[1] * k2[0]
        return 0 if d == 0 else (1 if d < 0 else -1)

    # float-proposed order validated by exact adjacent comparisons
    half = math.pi if mod_pi else 2 * math.pi

    def angle(k):
        a, b = k
        shift = max(abs(a).bit_length(), abs(b).bit_length()) - 500
        if shift > 0:
            a, b = a >> shift, b >> shift
        return math.atan2(b, a) % half

    ordered = sorted(buckets, key=angle)
    if any(cmp_keys(a, b) >= 0 for a, b in zip(ordered, ordered[1:])):
        ordered = sorted(buckets, key=functools.cmp_to_key(cmp_keys))
    return [buckets[k] for k in ordered]
