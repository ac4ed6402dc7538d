from fractions import Fraction

import numpy as np
import pytest

import oracle
from sepchk import geometry as geo


def fp(*pts):
    return [geo.frac_point(p) for p in pts]


def test_hyperplane_normal():
    assert geo.hyperplane_normal(fp((0, 0), (2, 0))) == (0, 2)
    assert geo.hyperplane_normal(fp((1, 1), (1, 1))) is None
    assert geo.hyperplane_normal(fp((0, 0, 0), (1, 0, 0), (2, 0, 0))) is None
    with pytest.raises(ValueError):
        geo.hyperplane_normal(fp((0, 0, 0), (1, 0, 0)))


def test_degenerate_sigma_rejected():
    with pytest.raises(ValueError):
        geo.meets_relative_interior(fp((0, 0), (0, 0)), fp((1, 1), (2, 2)))


class TestRelativeInterior2D:
    def test_hand_cases(self):
        s = fp((0, 0), (2, 0))
        assert geo.meets_relative_interior(s, fp((1, -1), (1, 1)))  # crossing
        assert not geo.meets_relative_interior(s, fp((2, -1), (2, 1)))  # through an endpoint only
        assert geo.meets_relative_interior(s, fp((1, 0), (5, 0)))  # collinear overlap
        assert not geo.meets_relative_interior(s, fp((2, 0), (5, 0)))  # collinear, touching the end
        assert geo.meets_relative_interior(s, fp((1, 0), (1, 0)))  # a point inside
        assert not geo.meets_relative_interior(s, fp((0, 1), (2, 1)))  # parallel

    def test_random_against_parametric_oracle(self):
        rng = np.random.default_rng(11)
        seen = {True: 0, False: 0}
        for _ in range(3000):
            a, b, c, d = (tuple(int(v) for v in rng.integers(-3, 4, size=2)) for _ in range(4))
            if a == b:
                continue
            got = geo.meets_relative_interior(fp(a, b), fp(c, d))
            want = oracle.open_segment_meets_segment(a, b, c, d)
            assert got == want, (a, b, c, d)
            seen[got] += 1
        assert min(seen.values()) > 200


class TestRelativeInterior3D:
    TRI = ((0, 0, 0), (4, 0, 0), (0, 4, 0))

    def test_hand_cases(self):
        s = fp(*self.TRI)
        assert geo.meets_relative_interior(s, fp((1, 1, -1), (1, 1, 1), (3, 3, 3)))
        assert not geo.meets_relative_interior(s, fp((4, 0, 0), (5, 5, 1), (5, -5, 1)))  # shared vertex only
        assert not geo.meets_relative_interior(s, fp((0, 0, 0), (4, 0, 0), (1, -3, 2)))  # shared edge only
        assert geo.meets_relative_interior(s, fp((1, 1, 0), (5, 1, 0), (1, 5, 0)))  # coplanar overlap
        assert not geo.meets_relative_interior(s, fp((2, 2, 0), (5, 2, 0), (2, 5, 0)))  # coplanar, corner on edge
        assert not geo.meets_relative_interior(s, fp((0, 0, 1), (4, 0, 1), (0, 4, 1)))  # parallel

    def test_random_segments_against_oracle(self):
        rng = np.random.default_rng(12)
        seen = {True: 0, False: 0}
        for _ in range(2500):
            p, q = (tuple(int(v) for v in rng.integers(-1, 5, size=3)) for _ in range(2))
            if rng.random() < 0.5:
                p, q = (p[0], p[1], 0), (q[0], q[1], 0)  # force coplanar cases
            got = geo.meets_relative_interior(fp(*self.TRI), fp(p, q))
            assert got == oracle.open_triangle_meets_segment(self.TRI, p, q), (p, q)
            seen[got] += 1
        assert min(seen.values()) > 100


class TestBoxes:
    def test_closed_box_touching(self):
        h = Fraction(1)
        assert geo.box_meets_simplex(fp((1, 1), (3, 3)), geo.frac_point((0, 0)), h)  # corner touch
        assert not geo.box_meets_simplex(fp((0, 1.5), (1.5, 0)), geo.frac_point((1, 1)), h)

    def test_segments_against_liang_barsky(self):
        rng = np.random.default_rng(13)
        seen = {True: 0, False: 0}
        for d in (2, 3):
            for _ in range(2500):
                p, q = (tuple(int(v) / 4 for v in rng.integers(-4, 9, size=d)) for _ in range(2))
                lo = tuple(int(v) / 4 for v in rng.integers(-2, 6, size=d))
                got = geo.box_meets_simplex(fp(p, q), geo.frac_point(lo), Fraction(1, 2))
                hi = tuple(v + 0.5 for v in lo)
                assert got == (oracle.clip_segment(p, q, lo, hi) is not None), (p, q, lo)
                seen[got] += 1
        assert min(seen.values()) > 300

    def test_triangles_against_oracle(self):
        rng = np.random.default_rng(14)
        seen = {True: 0, False: 0}
        for _ in range(2500):
            tri = [tuple(int(v) / 4 for v in rng.integers(-4, 9, size=2)) for _ in range(3)]
            lo = tuple(int(v) / 4 for v in rng.integers(-2, 6, size=2))
            got = geo.box_meets_simplex(fp(*tri), geo.frac_point(lo), Fraction(1, 4))
            hi = tuple(v + 0.25 for v in lo)
            assert got == oracle.triangle_meets_box(tri, lo, hi), (tri, lo)
            seen[got] += 1
        assert min(seen.values()) > 300

    def test_tetrahedron_uses_every_face(self):
        # box sits just outside the slanted face x + y + z = 1; unit and edge-cross axes alone miss it
        tet = fp((0, 0, 0), (1, 0, 0), (0, 1, 0), (0, 0, 1))
        lo = geo.frac_point((0.4, 0.4, 0.4))
        assert not geo.box_meets_simplex(tet, lo, Fraction(1, 10))
        assert geo.box_meets_simplex(tet, geo.frac_point((0.2, 0.2, 0.2)), Fraction(1, 10))
