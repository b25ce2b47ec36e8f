"""Tests for exact polytope/cone geometry."""

import itertools
import random
from fractions import Fraction

import pytest

from samoeba.convex import (
    Cone,
    EmptyInputError,
    GeometryError,
    LatticePolytope,
    dd_cone,
    diag_extremes,
    dominates,
    majorization_contains,
    primitive,
    weight_polytope,
)

HEXAGON = [(-1, -1), (1, -2), (-2, 1), (4, 0), (0, 4), (4, 4)]


def brute_force_contains(points, y):
    """Exact membership of y in conv(points) via hull facets (oracle)."""
    poly = LatticePolytope.hull(points)
    return poly.contains(y)


class TestDD:
    def test_full_space(self):
        lin, rays = dd_cone([], 3)
        assert len(lin) == 3 and rays == []

    def test_halfspace(self):
        lin, rays = dd_cone([[1, 0]], 2)
        assert len(lin) == 1
        assert rays == [(1, 0)] or [primitive(r) for r in rays] == [(1, 0)]

    def test_quadrant(self):
        lin, rays = dd_cone([[1, 0], [0, 1]], 2)
        assert lin == []
        assert sorted(primitive(r) for r in rays) == [(0, 1), (1, 0)]

    def test_octant_3d(self):
        lin, rays = dd_cone([[1, 0, 0], [0, 1, 0], [0, 0, 1]], 3)
        assert lin == []
        assert sorted(primitive(r) for r in rays) == [
            (0, 0, 1), (0, 1, 0), (1, 0, 0)]

    def test_pointed_cone_rays(self):
        # {w : 2w1 >= w2, 2w2 >= w1} is generated by (2,1) and (1,2)
        lin, rays = dd_cone([[2, -1], [-1, 2]], 2)
        assert lin == []
        assert sorted(primitive(r) for r in rays) == [(1, 2), (2, 1)]

    def test_line(self):
        lin, rays = dd_cone([[1, 1], [-1, -1]], 2)
        assert len(lin) == 1 and primitive(lin[0]) in ((1, -1), (-1, 1))
        assert rays == []

    def test_empty_interior_origin_only(self):
        lin, rays = dd_cone([[1, 0], [-1, 0], [0, 1], [0, -1]], 2)
        assert lin == [] and rays == []


class TestHull:
    def test_segment_with_midpoint(self):
        p = LatticePolytope.hull([(2, 0), (1, 1), (0, 2)])
        assert p.vertices == ((0, 2), (2, 0))
        assert p.dim() == 1
        assert p.contains((1, 1))
        assert not p.contains((1, 0))

    def test_single_point(self):
        p = LatticePolytope.hull([(3, -1)])
        assert p.vertices == ((3, -1),)
        assert p.facets == ()
        assert p.contains((3, -1)) and not p.contains((3, 0))
        assert p.dim() == 0

    def test_hexagon(self):
        p = LatticePolytope.hull(
            HEXAGON + [(0, 0), (1, 1), (2, 2), (3, 1)])
        assert set(p.vertices) == set(HEXAGON)
        assert p.dim() == 2
        assert len(p.facets) == 6

    def test_empty_error(self):
        with pytest.raises(EmptyInputError):
            LatticePolytope.hull([])

    def test_cube_3d(self):
        pts = list(itertools.product([0, 1], repeat=3))
        p = LatticePolytope.hull(pts + [(0, 0, 0)])
        assert len(p.vertices) == 8
        assert len(p.facets) == 6
        assert p.contains((Fraction(1, 2), Fraction(1, 2), Fraction(1, 2)))

    def test_full_dim_simplex_4d(self):
        pts = [(0, 0, 0, 0), (1, 0, 0, 0), (0, 1, 0, 0), (0, 0, 1, 0),
               (0, 0, 0, 1)]
        p = LatticePolytope.hull(pts)
        assert len(p.vertices) == 5
        assert len(p.facets) == 5

    def test_lattice_points(self):
        p = LatticePolytope.hull([(0, 0), (2, 0), (0, 2)])
        assert sorted(p.lattice_points()) == [
            (0, 0), (0, 1), (0, 2), (1, 0), (1, 1), (2, 0)]


class TestFaces:
    def test_segment_midpoint_face_is_whole(self):
        p = LatticePolytope.hull([(2, 0), (0, 2)])
        f = p.smallest_face((1, 1))
        assert set(f.vertices) == {(2, 0), (0, 2)}
        assert f.dim() == 1

    def test_hexagon_vertex_face(self):
        p = LatticePolytope.hull(HEXAGON)
        f = p.smallest_face((4, 4))
        assert f.vertices == ((4, 4),)
        assert f.dim() == 0

    def test_interior_point_gives_full_face(self):
        p = LatticePolytope.hull([(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])
        f = p.smallest_face((1, 1))
        assert f.dim() == 2
        assert set(f.vertices) == set(p.vertices)

    def test_not_in_polytope(self):
        p = LatticePolytope.hull([(0, 0), (1, 0)])
        with pytest.raises(GeometryError):
            p.smallest_face((5, 5))


class TestNormalCone:
    def test_hexagon_vertex_44(self):
        # minimizing convention: {w : w.(4,4) <= w.y for all y}
        p = LatticePolytope.hull(HEXAGON)
        c = p.normal_cone(p.smallest_face((4, 4)))
        # cone {w1 <= 0, w2 <= 0}
        assert c.contains((-1, -1)) and c.contains((0, -1))
        assert not c.contains((1, -1)) and not c.contains((1, 1))
        assert sorted(c.rays) == [(-1, 0), (0, -1)]

    def test_hexagon_vertex_minus(self):
        p = LatticePolytope.hull(HEXAGON)
        c = p.normal_cone(p.smallest_face((-1, -1)))
        assert sorted(c.rays) == [(1, 2), (2, 1)]

    def test_point_polytope_full_cone(self):
        p = LatticePolytope.hull([(1, 2, 3)])
        c = p.normal_cone(p.smallest_face((1, 2, 3)))
        assert c.dim() == 3
        assert c.contains((5, -7, 1))

    def test_dimension_complement(self):
        p = LatticePolytope.hull(HEXAGON)
        # midpoint of the edge from (1,-2) to (4,0)
        edge = p.smallest_face((Fraction(5, 2), -1))
        c = p.normal_cone(edge)
        assert edge.dim() == 1 and c.dim() == 1

    def test_vertex_cones_tile_space(self):
        rng = random.Random(42)
        pts = [(0, 0, 0), (2, 1, 0), (0, 3, 1), (1, 0, 2), (2, 2, 2),
               (3, 0, 0)]
        p = LatticePolytope.hull(pts)
        cones = [p.normal_cone(p.smallest_face(v)) for v in p.vertices]
        for _ in range(200):
            w = tuple(Fraction(rng.randint(-50, 50), rng.randint(1, 7))
                      for _ in range(3))
            hits = [c for c in cones if c.contains(w, strictly=True)]
            on_boundary = [c for c in cones if c.contains(w, strictly=False)]
            assert len(hits) <= 1
            assert len(on_boundary) >= 1
            if len(hits) == 0:
                assert len(on_boundary) >= 2  # w sits on a cone wall


class TestMinkowski:
    def test_unit_square(self):
        s1 = LatticePolytope.hull([(0, 0), (1, 0)])
        s2 = LatticePolytope.hull([(0, 0), (0, 1)])
        sq = s1.minkowski(s2)
        assert set(sq.vertices) == {(0, 0), (1, 0), (0, 1), (1, 1)}

    def test_double_simplex(self):
        c = weight_polytope((0, 1))
        assert c.minkowski(c) == LatticePolytope.hull([(2, 0), (0, 2)])

    def test_translate_by_point(self):
        p = LatticePolytope.hull(HEXAGON)
        t = p.minkowski(LatticePolytope.hull([(5, -3)]))
        assert set(t.vertices) == {(v[0] + 5, v[1] - 3) for v in p.vertices}

    def test_dimension_mismatch(self):
        with pytest.raises(GeometryError):
            LatticePolytope.hull([(0, 0)]).minkowski(
                LatticePolytope.hull([(0, 0, 0)]))


class TestWeightPolytope:
    def test_simplex(self):
        p = weight_polytope((0, 1))
        assert p.vertices == ((0, 1), (1, 0))

    def test_symmetric_segment(self):
        p = weight_polytope((-1, 1))
        assert p.vertices == ((-1, 1), (1, -1))

    def test_triangle(self):
        p = weight_polytope((0, 0, 1))
        assert set(p.vertices) == {(1, 0, 0), (0, 1, 0), (0, 0, 1)}

    def test_not_monotone(self):
        with pytest.raises(GeometryError):
            weight_polytope((1, 0))


class TestMajorization:
    def test_center_of_segment(self):
        assert majorization_contains((-1, 1), (0, 0))

    def test_sum_mismatch(self):
        assert not majorization_contains((0, 1), (1, 1))

    def test_frozen_triple(self):
        # brute-force oracle over the 6 permutations agrees
        assert majorization_contains((0, 1, 2), (1, 1, 1))
        assert brute_force_contains(
            list(itertools.permutations((0, 1, 2))), (1, 1, 1))

    @pytest.mark.parametrize("n", [2, 3, 4])
    def test_against_brute_force(self, n):
        rng = random.Random(n)
        for _ in range(40):
            lam = tuple(sorted(rng.randint(-3, 3) for _ in range(n)))
            poly = weight_polytope(lam)
            for _ in range(10):
                y = tuple(Fraction(rng.randint(-9, 9), 3) for _ in range(n))
                assert majorization_contains(lam, y) == poly.contains(y)


class TestOrbitHullLinearity:
    def test_sum_and_scaling(self):
        # C(x + y) = C(x) + C(y) and C(a x) = a C(x), exact
        rng = random.Random(29)
        for _ in range(15):
            n = rng.choice([2, 3])
            x = tuple(sorted(rng.randint(-3, 3) for _ in range(n)))
            y = tuple(sorted(rng.randint(-3, 3) for _ in range(n)))
            lhs = weight_polytope(tuple(a + b for a, b in zip(x, y)))
            rhs = weight_polytope(x).minkowski(weight_polytope(y))
            assert lhs == rhs, (x, y)
            alpha = rng.randint(1, 3)
            scaled = weight_polytope(tuple(alpha * a for a in x))
            dilated = weight_polytope(x)
            for _ in range(alpha - 1):
                dilated = dilated.minkowski(weight_polytope(x))
            assert scaled == dilated


class TestDominates:
    def test_example(self):
        assert dominates((-1, 2), (0, 1))  # (0,1) below (-1,2)

    def test_reflexive(self):
        assert dominates((0, 1, 3), (0, 1, 3))

    def test_sum_mismatch(self):
        assert not dominates((0, 1), (0, 2))

    def test_partial_order_properties(self):
        rng = random.Random(17)
        lams = [tuple(sorted(rng.randint(-3, 3) for _ in range(3)))
                for _ in range(60)]
        for lam in lams:
            assert dominates(lam, lam)
        for _ in range(200):
            a, b, c = rng.sample(lams, 3)
            if dominates(a, b) and dominates(b, c):
                assert dominates(a, c)
            if dominates(a, b) and dominates(b, a):
                assert a == b

    def test_matches_hull_inclusion(self):
        rng = random.Random(23)
        for _ in range(30):
            x = tuple(sorted(rng.randint(-2, 2) for _ in range(3)))
            y = tuple(sorted(rng.randint(-2, 2) for _ in range(3)))
            inclusion = all(
                weight_polytope(x).contains(v)
                for v in weight_polytope(y).vertices)
            assert dominates(x, y) == inclusion


class TestDiagExtremes:
    def test_hexagon(self):
        p = LatticePolytope.hull(HEXAGON)
        d = diag_extremes(p)
        assert d.n_minus == -1 and d.n_plus == 4
        # outward cones: at (4,4) the open positive quadrant, at (-1,-1)
        # the open cone spanned by (-1,-2) and (-2,-1)
        assert sorted(d.cone_plus.rays) == [(0, 1), (1, 0)]
        assert d.cone_plus.contains((1, 1))
        assert not d.cone_plus.contains((1, 0))  # boundary, cone is open
        assert sorted(d.cone_minus.rays) == [(-2, -1), (-1, -2)]
        assert d.cone_minus.contains((-1, -1))
        assert not d.cone_minus.contains((2, 1))

    def test_pentagon_of_low_degree_terms(self):
        # hull of {(0,0),(1,0),(0,1),(1,1),(2,1),(1,2)}: diagonal points
        # (0,0) vertex and (1,1) interior
        p = LatticePolytope.hull(
            [(0, 0), (1, 0), (0, 1), (1, 1), (2, 1), (1, 2)])
        d = diag_extremes(p)
        assert d.n_minus == 0 and d.n_plus == 1
        assert d.cone_plus is None  # (1,1) interior, not a vertex
        assert d.cone_minus is not None
        assert d.cone_minus.contains((-1, -1))
        assert d.cone_minus.contains((-3, -1))
        assert not d.cone_minus.contains((0, -1))  # open
        assert not d.cone_minus.contains((1, 1))

    def test_antidiagonal_segment(self):
        p = LatticePolytope.hull([(2, 0), (0, 2)])
        d = diag_extremes(p)
        assert d.n_minus == 1 and d.n_plus == 1
        assert d.cone_minus is None and d.cone_plus is None

    def test_diagonal_segment(self):
        # the open halfspaces {sum < 0} and {sum > 0}; the complement of
        # their union is the hyperplane {x1 + x2 = 0}
        p = LatticePolytope.hull([(0, 0), (1, 1)])
        d = diag_extremes(p)
        assert d.n_minus == 0 and d.n_plus == 1
        assert d.cone_minus.contains((-1, -2))
        assert d.cone_minus.contains((1, -2))  # sum negative
        assert not d.cone_minus.contains((1, -1))  # boundary
        assert d.cone_plus.contains((2, 1))
        assert not d.cone_plus.contains((1, -1))

    def test_off_diagonal(self):
        p = LatticePolytope.hull([(1, 0), (0, 1)])
        d = diag_extremes(p)
        assert d.n_minus is None and d.n_plus is None

    def test_point_on_diagonal(self):
        p = LatticePolytope.hull([(2, 2)])
        d = diag_extremes(p)
        assert d.n_minus == d.n_plus == 2
        assert d.cone_minus.dim() == 2
        assert d.cone_minus.contains((1, 1)) and d.cone_minus.contains((-1, 1))


class TestConeStructure:
    def test_generator_inequality_duality(self):
        c = Cone.from_generators(2, [(2, 1), (1, 2)])
        assert c.contains((1, 1))
        assert c.contains((2, 1)) and c.contains((1, 2))
        assert not c.contains((1, 0))
        for g in c.generators:
            assert c.contains(g)

    def test_relative_interior(self):
        c = Cone.from_inequalities(2, [(1, 0)], equations=[(0, 1)],
                                   is_open=True)
        # the ray x >= 0 inside the line y = 0: relint excludes the origin
        assert c.contains((1, 0))
        assert not c.contains((0, 0))
        assert not c.contains((1, 1))

    def test_json_roundtrip_fields(self):
        c = Cone.from_generators(2, [(1, 0), (0, 1)])
        d = c.to_dict()
        assert set(d) == {"n", "generators", "inequalities", "equations",
                          "open"}
        back = Cone.from_dict(d)
        assert set(back.rays) == set(c.rays)
        assert back.is_open == c.is_open
