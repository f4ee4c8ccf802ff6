"""Dual arrangement construction, Euler/Melchior audits, edge classes."""

import pytest

from orchard.arrangement import SphericalDcel, build_dual_arrangement, melchior_audit
from orchard.errors import DegeneratePencil
from orchard.families import FamilySpec, generate, kelly_moser, random_rational
from orchard.incidence import enumerate_lines, spectrum
from orchard.projective import affine_point
from orchard.incidence import make_configuration


class TestKnownArrangements:
    def test_kelly_moser(self):
        s = melchior_audit(kelly_moser())
        assert (s.V, s.E, s.F) == (9, 24, 16)
        assert dict(s.M) == {3: 16}
        assert dict(s.degree_hist) == {4: 3, 6: 6}
        assert s.euler_residual == 0 and s.melchior_residual == 0

    def test_unit_square(self):
        c = make_configuration(
            [affine_point(0, 0), affine_point(1, 0), affine_point(0, 1), affine_point(1, 1)]
        )
        s = melchior_audit(c)
        assert (s.V, s.E, s.F) == (6, 12, 7)
        assert dict(s.M) == {3: 4, 4: 3}
        # sum (s-3) M_s = 3 forced by N_2 = 6 with no rich lines
        assert sum((k - 3) * v for k, v in s.M.items()) == 3

    def test_triangle(self):
        c = make_configuration([affine_point(0, 0), affine_point(1, 0), affine_point(0, 1)])
        s = melchior_audit(c)
        assert (s.V, s.E, s.F) == (3, 6, 4)
        assert dict(s.M) == {3: 4}

    def test_x12(self):
        c = generate(FamilySpec("boroczky-base", 6))
        s = melchior_audit(c, start_prec=256)
        # V = sum N_k = 22, E = sum k N_k = 63, F = 1 - V + E = 42
        assert (s.V, s.E, s.F) == (22, 63, 42)
        assert s.melchior_residual == 0
        # N_2 = 6, N_6 = 1: 6 = 3 + 3 + sum (s-3) M_s forces all triangles
        assert all(k == 3 for k in s.M)

    def test_pencil_rejected(self):
        c = make_configuration([affine_point(i, 0) for i in range(5)])
        with pytest.raises(DegeneratePencil):
            build_dual_arrangement(c)


class TestMeshInvariants:
    def test_degree_equals_twice_members(self):
        c = random_rational(12, seed=4, box=6)
        table = enumerate_lines(c)
        d = SphericalDcel(c, table)
        for li, rec in enumerate(table.records):
            assert d.vertex_degree[2 * li] == 2 * rec.size

    def test_degree_histogram_matches_spectrum(self):
        c = random_rational(14, seed=8, box=6)
        s = spectrum(c)
        d = SphericalDcel(c, enumerate_lines(c))
        hist = d.degree_histogram()
        assert hist == {2 * k: v for k, v in s.counts.items()}

    def test_edge_partition_and_bound(self):
        for seed in range(5):
            c = random_rational(13 + seed, seed=seed, box=7)
            s = melchior_audit(c)
            assert s.good_edges + s.bad_edges == s.E
            assert s.bad_edges <= 16 * s.spectrum.ordinary

    def test_antipodal_consistency(self):
        c = random_rational(10, seed=2, box=5)
        d = SphericalDcel(c, enumerate_lines(c))
        Vs, Es, Fs = d.spherical_counts()
        V, E, F = d.projective_counts()
        assert (Vs, Es, Fs) == (2 * V, 2 * E, 2 * F)
        for h in range(len(d.he_from)):
            ah = d.antipodal_he(h)
            assert d.antipodal_he(ah) == h
            assert d.he_from[ah] == d.he_from[h] ^ 1

    def test_all_good_configuration_has_bad_zero_never(self):
        # triangle: all degrees 4 -> no good edges at all
        c = make_configuration([affine_point(0, 0), affine_point(1, 0), affine_point(0, 1)])
        s = melchior_audit(c)
        assert s.good_edges == 0 and s.bad_edges == s.E


class TestEulerMelchiorRandom:
    def test_random_corpus(self):
        for seed in range(8):
            n = 10 + 3 * seed
            c = random_rational(n, seed=100 + seed, box=9)
            s = melchior_audit(c)
            assert s.euler_residual == 0
            assert s.melchior_residual == 0
            assert s.spectrum.ordinary >= 3

    def test_really_good_flags_monotone(self):
        c = random_rational(16, seed=12, box=7)
        d = SphericalDcel(c, enumerate_lines(c))
        g0 = d.really_good_flags(0)
        g1 = d.really_good_flags(1)
        g2 = d.really_good_flags(2)
        for a, b, c_ in zip(g2, g1, g0):
            assert (not a) or b  # walk-2 good implies walk-1 good
            assert (not b) or c_
