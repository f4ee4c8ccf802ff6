"""Projective predicates, duality, and transforms."""

import random
from fractions import Fraction

import pytest

from orchard.errors import IdenticalLines, IdenticalPoints, ZeroTriple
from orchard.projective import (
    ProjLine,
    ProjPoint,
    ProjTransform,
    affine_point,
    collinear,
    dualize,
    equivalent,
    incident,
    join,
    line,
    meet,
    point,
)
from orchard.scalars import TrigScalar, s_neg


class TestJoinMeet:
    def test_join_examples(self):
        assert join(point(0, 0, 1), point(1, 0, 1)) == line(0, 1, 0)
        assert join(point(1, 0, 0), point(0, 1, 0)) == line(0, 0, 1)
        assert join(point(2, 4, 1), point(3, 9, 1)) == line(5, -1, -6)

    def test_meet_examples(self):
        assert meet(line(0, 1, 0), line(0, 0, 1)) == point(1, 0, 0)
        # parallels y=0 and y=1 meet at infinity
        assert meet(line(0, 1, 0), line(0, 1, -1)) == point(1, 0, 0)
        assert meet(line(5, -1, -6), line(1, 0, 0)) == point(0, -6, 1)

    def test_join_contains_both(self):
        rng = random.Random(11)
        for _ in range(100):
            p = point(rng.randint(-9, 9), rng.randint(-9, 9), rng.randint(0, 2))
            q = point(rng.randint(-9, 9), rng.randint(-9, 9), 1)
            if equivalent(p, q):
                continue
            l = join(p, q)
            assert incident(p, l) and incident(q, l)

    def test_identical_errors(self):
        with pytest.raises(IdenticalPoints):
            join(point(2, 4, 6), point(1, 2, 3))
        with pytest.raises(IdenticalLines):
            meet(line(1, 1, 1), line(2, 2, 2))

    def test_zero_triple(self):
        with pytest.raises(ZeroTriple):
            point(0, 0, 0)

    def test_meet_join_inverse(self):
        # meet(join(p,q), other line through p) == p
        rng = random.Random(5)
        for _ in range(50):
            p = affine_point(rng.randint(-9, 9), rng.randint(-9, 9))
            q = affine_point(rng.randint(-9, 9), rng.randint(-9, 9))
            r = affine_point(rng.randint(-9, 9), rng.randint(-9, 9))
            if equivalent(p, q) or equivalent(p, r) or collinear(p, q, r):
                continue
            assert meet(join(p, q), join(p, r)) == p


class TestCollinear:
    def test_examples(self):
        assert collinear(point(1, 0, 1), point(2, 0, 1), point(3, 0, 1))
        assert not collinear(point(0, 0, 1), point(1, 1, 1), point(1, 2, 1))
        # cuspidal parameters 1 + 2 - 3 = 0
        assert collinear(point(1, 1, 1), point(2, 8, 1), point(-3, -27, 1))

    def test_symbolic_chord(self):
        # circle points at 1/3 and 2/3 turns are collinear with [0,1,0]
        from orchard.families import circle_point

        assert collinear(circle_point(Fraction(1, 3)), circle_point(Fraction(2, 3)), point(0, 1, 0))
        assert not collinear(
            circle_point(Fraction(1, 3)), circle_point(Fraction(2, 3)), point(1, 0, 0)
        )


class TestDuality:
    def test_definition(self):
        d = dualize(point(1, 2, 3))
        assert isinstance(d, ProjLine) and d == line(1, 2, 3)

    def test_involution(self):
        p = point(3, -5, 7)
        assert dualize(dualize(p)) == p

    def test_incidence_preserved_random(self):
        rng = random.Random(23)
        checked = 0
        for _ in range(1000):
            p = point(rng.randint(-20, 20), rng.randint(-20, 20), rng.randint(-20, 20) or 1)
            l = line(rng.randint(-20, 20), rng.randint(-20, 20), rng.randint(-20, 20) or 1)
            assert incident(p, l) == incident(dualize(l), dualize(p))
            checked += 1
        assert checked == 1000

    def test_symmetric_example(self):
        p, l = point(0, 0, 1), line(1, 0, 0)
        assert incident(p, l)
        assert incident(dualize(l), dualize(p))


def _paper_transform() -> ProjTransform:
    """Clockwise rotation through pi/12 followed by [x,y,z] -> [-y,x,2z+x]."""
    c = TrigScalar("cos", Fraction(1, 12))
    s = TrigScalar("sin", Fraction(1, 12))
    rot = ProjTransform(((c, s, 0), (s_neg(s), c, 0), (0, 0, 1)), check=False)
    shear = ProjTransform(((0, -1, 0), (1, 0, 0), (1, 0, 2)), check=False)
    return shear.compose(rot)


class TestTransforms:
    def test_identity(self):
        t = ProjTransform.identity()
        p = point(3, 4, 5)
        assert t.apply_point(p) == p

    def test_paper_map_fixes_origin(self):
        t = _paper_transform()
        assert equivalent(t.apply_point(point(0, 0, 1)), point(0, 0, 1))

    def test_paper_map_sends_pole_to_cot(self):
        t = _paper_transform()
        img = t.apply_point(point(0, 1, 0))
        target = ProjPoint((s_neg(TrigScalar("cot", Fraction(1, 12))), Fraction(1), Fraction(1)))
        assert equivalent(img, target)

    def test_collinearity_preserved(self):
        rng = random.Random(9)
        for _ in range(25):
            rows = [[rng.randint(-5, 5) for _ in range(3)] for _ in range(3)]
            try:
                t = ProjTransform(rows)
            except ValueError:
                continue
            pts = [
                point(rng.randint(-9, 9), rng.randint(-9, 9), 1) for _ in range(3)
            ]
            if equivalent(pts[0], pts[1]) or equivalent(pts[1], pts[2]) or equivalent(pts[0], pts[2]):
                continue
            imgs = [t.apply_point(p) for p in pts]
            assert collinear(*pts) == collinear(*imgs)

    def test_inverse_composition(self):
        t = ProjTransform(((1, 2, 0), (0, 1, 3), (1, 0, 1)))
        ti = t.inverse()
        for coords in ((1, 2, 3), (0, 1, 0), (5, -7, 2)):
            p = point(*coords)
            assert equivalent(ti.apply_point(t.apply_point(p)), p)

    def test_singular_rejected(self):
        with pytest.raises(ValueError):
            ProjTransform(((1, 2, 3), (2, 4, 6), (0, 0, 1)))


def test_rational_normalization_invariants():
    p = point(Fraction(2, 3), Fraction(-4, 3), Fraction(2))
    # coprime integer triple with positive first nonzero coordinate
    assert p.ikey == (1, -2, 3)
    q = point(-2, 4, -6)
    assert q.ikey == (1, -2, 3)
    assert p == q
