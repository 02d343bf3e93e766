from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from latgap.errors import BudgetExceeded, InvalidInput
from latgap.exactlin import dot
from latgap.graphs import complete_graph, cycle_graph, edge_polytope
from latgap.fibration import make_pka
from latgap.polytope import (
    LatticePolytope,
    cone_over,
    dilate,
    ehrhart_polynomial,
    facets,
    level_count,
    points_at_degree,
    product,
)


@pytest.fixture(scope="module")
def segment():
    return LatticePolytope([(0,), (1,)])


@pytest.fixture(scope="module")
def square(segment):
    return product(segment, segment)


@pytest.fixture(scope="module")
def pc4():
    return edge_polytope(cycle_graph(4))


def box_points(lo, hi, dim):
    if dim == 0:
        yield ()
        return
    for rest in box_points(lo, hi, dim - 1):
        for x in range(lo, hi + 1):
            yield rest + (x,)


def same_box_membership(cone_a, cone_b, lo, hi, dim):
    for pt in box_points(lo, hi, dim):
        if cone_a.contains(pt) != cone_b.contains(pt):
            return False
    return True


class TestConeOver:
    def test_unit_segment(self, segment):
        cone = cone_over(segment)
        assert cone.equations == ()
        assert set(cone.inequalities) == {(0, 1), (1, -1)}

    def test_cycle_four(self, pc4):
        # expected: v0 = v1 + v3 = v2 + v4 and coordinates nonnegative
        from latgap.exactlin import HRepCone
        expected = HRepCone(5, ((1, -1, 0, -1, 0), (1, 0, -1, 0, -1)),
                            ((0, 1, 0, 0, 0), (0, 0, 1, 0, 0),
                             (0, 0, 0, 1, 0), (0, 0, 0, 0, 1)))
        assert same_box_membership(cone_over(pc4), expected, -1, 3, 5)

    def test_vertices_lie_in_cone(self, pc4):
        cone = cone_over(pc4)
        for v in pc4.vertices:
            assert cone.contains((1, *v))


class TestPointsAtDegree:
    def test_degree_zero_is_origin(self, pc4):
        assert points_at_degree(pc4, 0) == [(0, 0, 0, 0, 0)]

    def test_cycle_four_level_counts(self, pc4):
        for d in range(5):
            assert len(points_at_degree(pc4, d)) == (d + 1) ** 2

    def test_pka_level_one_is_vertex_set(self):
        p = make_pka(3, 5)
        pts = points_at_degree(p, 1)
        assert len(pts) == 12
        assert {pt[1:] for pt in pts} == set(p.vertices)

    def test_canonical_order_and_idempotence(self, pc4):
        pts = points_at_degree(pc4, 3)
        assert pts == sorted(pts)
        assert pts == points_at_degree(pc4, 3)

    def test_negative_degree_rejected(self, pc4):
        with pytest.raises(InvalidInput):
            points_at_degree(pc4, -1)

    def test_budget(self, pc4):
        with pytest.raises(BudgetExceeded):
            points_at_degree(pc4, 4, budget=3)


class TestProduct:
    def test_square(self, square):
        assert square.vertices == ((0, 0), (0, 1), (1, 0), (1, 1))

    def test_levels_factor(self, pc4, segment):
        prod = product(pc4, segment)
        for d in range(5):
            left = points_at_degree(pc4, d)
            right = points_at_degree(segment, d)
            combo = sorted(u + w[1:] for u in left for w in right)
            assert points_at_degree(prod, d) == combo

    def test_vertex_count_of_fibered_product(self):
        prod = product(make_pka(3, 5), make_pka(4, 6))
        assert len(prod.vertices) == 12 * 16

    def test_level_count_structural(self, pc4, segment):
        prod = product(pc4, segment)
        for d in range(4):
            assert level_count(prod, d) == (d + 1) ** 3


class TestDilate:
    def test_identity(self, pc4):
        assert dilate(pc4, 1) is pc4

    def test_levels_rescale(self, pc4):
        assert len(points_at_degree(dilate(pc4, 2), 1)) == 9

    def test_count_identity(self):
        p = make_pka(3, 5)
        q = dilate(p, 2)
        for m in range(1, 4):
            assert len(points_at_degree(q, m)) == len(points_at_degree(p, 2 * m))

    def test_monotone_level_one(self, pc4):
        for s in (1, 2, 3):
            assert len(points_at_degree(pc4, 1)) <= len(points_at_degree(dilate(pc4, s), 1))

    def test_invalid(self, pc4):
        with pytest.raises(InvalidInput):
            dilate(pc4, 0)


class TestFacets:
    def test_square_facets(self, square):
        fs = facets(square)
        assert len(fs) == 4
        for f in fs:
            assert f.polytope.vertices == ((0,), (1,))

    def test_octahedron(self):
        oct_ = edge_polytope(complete_graph(4))
        fs = facets(oct_)
        assert len(fs) == 8
        for f in fs:
            assert len(f.vertices) == 3
            assert f.polytope.dim == 2

    def test_facet_vertices_are_tight(self, pc4):
        for f in facets(pc4):
            for v in f.vertices:
                assert dot(f.support, (1, *v)) == 0
            assert len(f.vertices) == len(f.polytope.vertices)

    def test_induced_is_lattice_isomorphism(self):
        # facet lattice coordinates must preserve lattice point counts
        p = make_pka(2, 3)
        for f in facets(p):
            assert f.polytope.dim == p.dim - 1


class TestEhrhart:
    def test_segment(self, segment):
        assert ehrhart_polynomial(segment) == [Fraction(1), Fraction(1)]

    def test_cycle_four(self, pc4):
        assert ehrhart_polynomial(pc4) == [Fraction(1), Fraction(2), Fraction(1)]

    def test_constant_term_is_one(self, square):
        for p in (square, edge_polytope(complete_graph(4))):
            assert ehrhart_polynomial(p)[0] == 1


class TestVertexValidation:
    def test_interior_point_rejected(self):
        with pytest.raises(InvalidInput):
            LatticePolytope([(0, 0), (2, 0), (0, 2), (2, 2), (1, 1)])

    def test_midpoint_rejected(self):
        with pytest.raises(InvalidInput):
            LatticePolytope([(0,), (1,), (2,)])

    def test_reconstruction_from_all_lattice_points_fails(self, square):
        big = dilate(square, 2)
        all_points = [pt[1:] for pt in points_at_degree(big, 1)]
        assert len(all_points) == 9
        with pytest.raises(InvalidInput):
            LatticePolytope(all_points)

    def test_duplicates_collapse(self):
        p = LatticePolytope([(0,), (1,), (1,)])
        assert p.vertices == ((0,), (1,))

    def test_empty_rejected(self):
        with pytest.raises(InvalidInput):
            LatticePolytope([])


@settings(max_examples=60, deadline=None)
@given(st.sets(st.tuples(st.integers(0, 3), st.integers(0, 3)), min_size=1, max_size=5))
def test_vertex_sets_reconstruct_stably(pts):
    """Point sets either validate (all points extreme) or are rejected;
    validated hulls reconstruct unchanged and lie inside their own cone."""
    try:
        poly = LatticePolytope(sorted(pts))
    except InvalidInput:
        return
    again = LatticePolytope(poly.vertices)
    assert again.vertices == poly.vertices
    cone = cone_over(poly)
    for v in poly.vertices:
        assert cone.contains((1, *v))
