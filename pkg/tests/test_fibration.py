import random
from fractions import Fraction

import pytest

from latgap.errors import InvalidInput
from latgap.exactlin import fm_eliminate
from latgap.fibration import (
    FiberSpec,
    build_fibration,
    make_pka,
    make_qab,
    pka_hrep,
    validate_fibration,
)
from latgap.graphs import complete_graph, cycle_graph, edge_polytope
from latgap.polytope import LatticePolytope, points_at_degree


def unit_heights(base, special=None, lift=None):
    heights = {v: (0, 1) for v in base.vertices}
    if special is not None:
        heights[special] = lift
    return heights


class TestBuildFibration:
    def test_unit_square(self):
        seg = LatticePolytope([(0,), (1,)])
        poly = build_fibration(FiberSpec(base=seg, heights=unit_heights(seg)))
        assert poly.vertices == ((0, 0), (0, 1), (1, 0), (1, 1))
        assert poly.fiber_base == seg

    def test_matches_explicit_cycle_construction(self):
        base = edge_polytope(cycle_graph(6))
        special = (1, 1, 0, 0, 0, 0)
        poly = build_fibration(FiberSpec(
            base=base, heights=unit_heights(base, special, (5, 6))))
        assert set(poly.vertices) == set(make_pka(3, 5).vertices)

    def test_zero_length_fiber_rejected(self):
        seg = LatticePolytope([(0,), (1,)])
        heights = {(0,): (0, 1), (1,): (2, 2)}
        with pytest.raises(InvalidInput):
            build_fibration(FiberSpec(base=seg, heights=heights))

    def test_heights_must_cover_vertices(self):
        seg = LatticePolytope([(0,), (1,)])
        with pytest.raises(InvalidInput):
            build_fibration(FiberSpec(base=seg, heights={(0,): (0, 1)}))


class TestValidate:
    @pytest.mark.parametrize("poly", [make_pka(3, 5), make_qab(1, 8)],
                             ids=["even-cycle", "octahedron"])
    def test_families_are_fibrations(self, poly):
        report = validate_fibration(poly)
        assert report.valid
        assert all(f.endpoints_integral and f.lattice_points >= 2
                   for f in report.fibers)

    def test_collapsed_fiber_detected(self):
        # a lifted square with one fiber squeezed to a single point
        poly = LatticePolytope([(0, 0), (0, 1), (1, 0)])
        report = validate_fibration(poly)
        assert not report.valid
        bad = [f for f in report.fibers if not f.positive_length]
        assert bad and bad[0].base_point == (1,)

    def test_fractional_endpoint_detected(self):
        # upper hull from (0,2) to (2,1) passes through (1, 3/2)
        poly = LatticePolytope([(0, 0), (0, 2), (2, 0), (2, 1)])
        report = validate_fibration(poly)
        assert not report.valid
        mid = next(f for f in report.fibers if f.base_point == (1,))
        assert not mid.endpoints_integral
        assert mid.hi == Fraction(3, 2)
        assert mid.lattice_points == 2


class TestPka:
    def test_vertex_counts(self):
        assert len(make_pka(3, 5).vertices) == 12
        assert make_pka(3, 5).ambient_dim == 7
        assert len(make_pka(4, 6).vertices) == 16

    def test_invalid_parameters(self):
        with pytest.raises(InvalidInput):
            make_pka(1, 5)
        with pytest.raises(InvalidInput):
            make_pka(3, -1)

    def test_prism_case_has_unit_heights(self):
        poly = make_pka(2, 0)
        assert {v[-1] for v in poly.vertices} == {0, 1}

    def test_hrep_vertex_membership(self):
        hr = pka_hrep(3, 5)
        for v in make_pka(3, 5).vertices:
            assert hr.contains((1, *v))

    def test_hrep_interior_cone_point(self):
        assert pka_hrep(3, 5).contains((3, 1, 1, 1, 1, 1, 1, 4))

    def test_hrep_rejects_fiber_bound_violation(self):
        # t exceeds the even-index bound (which is 0 here)
        assert not pka_hrep(3, 5).contains((1, 1, 0, 0, 0, 0, 0, 3))

    def test_hrep_box_equivalence_prism_case(self):
        # with unit heights everywhere the classical system is the exact cone
        hr = pka_hrep(2, 0)
        cone = make_pka(2, 0).cone
        from itertools import product as iproduct
        for pt in iproduct(range(0, 5), repeat=6):
            assert hr.contains(pt) == cone.contains(pt), pt

    def test_hrep_is_relaxation_k2(self):
        # cone points always satisfy the system; the converse fails over
        # base points forced to use the lifted edge
        p = make_pka(2, 3)
        hr = pka_hrep(2, 3)
        from itertools import product as iproduct
        for pt in iproduct(range(0, 5), repeat=6):
            if p.cone.contains(pt):
                assert hr.contains(pt), pt
        forced = (1, 1, 1, 0, 0, 0)  # fiber over the lifted edge starts at a=3
        assert hr.contains(forced) and not p.cone.contains(forced)

    def test_hrep_is_relaxation_k3(self):
        p = make_pka(3, 5)
        hr = pka_hrep(3, 5)
        for d in range(4):
            for pt in points_at_degree(p, d):
                assert hr.contains(pt)
        rng = random.Random(4242)
        for _ in range(20000):
            pt = tuple(rng.randint(0, 6) for _ in range(8))
            if p.cone.contains(pt):
                assert hr.contains(pt), pt
        forced = (1, 1, 1, 0, 0, 0, 0, 0)
        assert hr.contains(forced) and not p.cone.contains(forced)

    def test_projection_of_cone_is_base_cone(self):
        # dropping the fiber coordinate recovers the even-cycle edge cone
        from itertools import product as iproduct
        p = make_pka(3, 5)
        rows = list(p.cone.inequalities)
        rows += [r for e in p.cone.equations for r in (e, tuple(-x for x in e))]
        projected = [r[:-1] for r in fm_eliminate(rows, p.ambient_dim)]
        base_cone = edge_polytope(cycle_graph(6)).cone
        for pt in iproduct(range(3), repeat=7):
            via_fm = all(sum(c * x for c, x in zip(row, pt)) >= 0
                         for row in projected)
            assert via_fm == base_cone.contains(pt), pt


class TestQab:
    def test_heights_a1_b8(self):
        poly = make_qab(1, 8)
        by_base = {}
        for v in poly.vertices:
            by_base.setdefault(v[:-1], []).append(v[-1])
        segs = {base: (min(ts), max(ts)) for base, ts in by_base.items()}
        assert segs[(1, 1, 0, 0)] == (0, 1)
        assert segs[(0, 1, 1, 0)] == (0, 1)
        assert segs[(1, 0, 1, 0)] == (0, 1)
        assert segs[(1, 0, 0, 1)] == (0, 8)
        assert segs[(0, 1, 0, 1)] == (14, 22)
        assert segs[(0, 0, 1, 1)] == (31, 39)

    def test_heights_a2_b15(self):
        poly = make_qab(2, 15)
        ts = {v[:-1]: [] for v in poly.vertices}
        for v in poly.vertices:
            ts[v[:-1]].append(v[-1])
        assert (min(ts[(0, 1, 0, 1)]), max(ts[(0, 1, 0, 1)])) == (25, 40)
        assert (min(ts[(0, 0, 1, 1)]), max(ts[(0, 0, 1, 1)])) == (56, 71)

    def test_twelve_vertices_in_z5(self):
        poly = make_qab(2, 15)
        assert len(poly.vertices) == 12
        assert poly.ambient_dim == 5

    def test_invalid(self):
        with pytest.raises(InvalidInput):
            make_qab(0, 8)


def test_random_fibrations_validate():
    """Random vertex segments over unimodular bases always fiber."""
    rng = random.Random(31415)
    bases = [edge_polytope(cycle_graph(4)), edge_polytope(cycle_graph(6)),
             edge_polytope(complete_graph(4))]
    for trial in range(200):
        base = bases[trial % len(bases)]
        heights = {}
        for v in base.vertices:
            lo = rng.randint(0, 4)
            heights[v] = (lo, rng.randint(lo + 1, 5))
        poly = build_fibration(FiberSpec(base=base, heights=heights))
        assert validate_fibration(poly).valid, heights
