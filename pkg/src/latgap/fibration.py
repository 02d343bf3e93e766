"""Lattice segmental fibrations and the two explicit fibered families.

A fibration appends one segment coordinate to a base polytope: each base
vertex v gets the two lifted vertices (v, lo) and (v, hi).  The validator
recomputes every fiber over the base's lattice points exactly and reports,
separately, whether the endpoints are integral and whether the fiber holds
at least two lattice points.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction

from .errors import InvalidInput
from .exactlin import HRepCone, canonical_sign, fm_eliminate, primitive
from .graphs import complete_graph, cycle_graph, edge_polytope
from .polytope import (
    LatticePolytope,
    enumerate_lattice_points,
    fiber_bounds,
)


@dataclass(frozen=True)
class FiberSpec:
    """Base polytope plus a segment [lo, hi] over each base vertex."""

    base: LatticePolytope
    heights: dict

    def normalized_heights(self) -> dict:
        out = {}
        for v, (lo, hi) in self.heights.items():
            out[tuple(v)] = (int(lo), int(hi))
        return out


def build_fibration(spec: FiberSpec) -> LatticePolytope:
    """Lift the base by the vertex segments; the fiber coordinate is last."""
    heights = spec.normalized_heights()
    if set(heights) != set(spec.base.vertices):
        raise InvalidInput("heights must be given for exactly the base vertices")
    verts = []
    for v in spec.base.vertices:
        lo, hi = heights[v]
        if hi < lo + 1:
            raise InvalidInput(
                f"fiber over {v} must have positive length (got [{lo}, {hi}])")
        verts.append(v + (lo,))
        verts.append(v + (hi,))
    # both lifted endpoints over a base vertex are vertices of the hull
    return LatticePolytope(verts, validate=False, fiber_base=spec.base)


@dataclass(frozen=True)
class FiberCheck:
    """Validation record for the fiber over one base lattice point."""

    base_point: tuple
    lo: Fraction
    hi: Fraction
    endpoints_integral: bool
    lattice_points: int
    positive_length: bool

    @property
    def ok(self) -> bool:
        return self.endpoints_integral and self.positive_length


@dataclass(frozen=True)
class FibrationReport:
    valid: bool
    fibers: tuple


def validate_fibration(p: LatticePolytope, budget=None) -> FibrationReport:
    """Check that the last coordinate fibers P into lattice segments.

    Fibers are computed over every lattice point of the projected base
    polytope; the verdict requires integral endpoints and at least two
    lattice points in every fiber.
    """
    if p.ambient_dim < 1:
        raise InvalidInput("nothing to project away")
    cone = p.cone
    rows = [r for r in cone.equations] + [tuple(-x for x in r) for r in cone.equations]
    rows += list(cone.inequalities)
    projected = fm_eliminate(rows, p.ambient_dim)
    projected = [r[:-1] for r in projected]
    boxes = []
    for j in range(p.ambient_dim - 1):
        vals = [v[j] for v in p.vertices]
        boxes.append((min(vals), max(vals)))
    base_points = enumerate_lattice_points((), projected, 1, boxes, budget)

    checks = []
    for x in base_points:
        bounds = fiber_bounds(cone, (1, *x))
        if bounds is None:
            raise AssertionError("projected point has an empty fiber")
        lo, hi = bounds
        integral = lo.denominator == 1 and hi.denominator == 1
        count = max(math.floor(hi) - math.ceil(lo) + 1, 0)
        checks.append(FiberCheck(
            base_point=x, lo=lo, hi=hi,
            endpoints_integral=integral,
            lattice_points=count,
            positive_length=count >= 2,
        ))
    return FibrationReport(valid=all(c.ok for c in checks), fibers=tuple(checks))


def make_pka(k: int, a: int) -> LatticePolytope:
    """Fibered even-cycle family: edge polytope of C_{2k} lifted by unit
    segments, except the distinguished edge (1,2) lifted to [a, a+1]."""
    if k < 2:
        raise InvalidInput("need k >= 2")
    if a < 0:
        raise InvalidInput("need a >= 0")
    base = edge_polytope(cycle_graph(2 * k))
    heights = {}
    special = [0] * (2 * k)
    special[0] = 1
    special[1] = 1
    for v in base.vertices:
        heights[v] = (a, a + 1) if v == tuple(special) else (0, 1)
    poly = build_fibration(FiberSpec(base=base, heights=heights))
    poly.degree_hint = a + 2
    return poly


def pka_hrep(k: int, a: int) -> HRepCone:
    """The classical constraint system for the fibered even-cycle family.

    Coordinates are (degree, v_1..v_{2k}, t): the two alternating-sum
    equalities, cyclic inequalities 0 <= v_i <= v_{i-1} + v_{i+1}, and the
    two fiber bounds 0 <= t <= (a+1)v_1 + v_3 + ... (same with even
    indices).

    Every point of the cone over the polytope satisfies this system, and
    for a = 0 the two sets coincide.  For a >= 1 the system is a strict
    relaxation: over base points whose every edge decomposition uses the
    lifted edge (multiples of its indicator, for instance) the true fiber
    starts at a times that forced multiplicity, while the system allows
    t >= 0.  The full facet description is available from ``cone_over``.
    """
    if k < 2 or a < 0:
        raise InvalidInput("need k >= 2 and a >= 0")
    n = 2 * k
    width = n + 2

    def row(entries):
        r = [0] * width
        for idx, val in entries:
            r[idx] = val
        return tuple(r)

    eqs = []
    for parity in (1, 2):
        entries = [(0, -1)] + [(i, 1) for i in range(parity, n + 1, 2)]
        eqs.append(canonical_sign(primitive(row(entries))))
    ineqs = []
    for i in range(1, n + 1):
        ineqs.append(row([(i, 1)]))
        left = i - 1 if i > 1 else n
        right = i + 1 if i < n else 1
        ineqs.append(row([(left, 1), (i, -1), (right, 1)]))
    ineqs.append(row([(n + 1, 1)]))
    for parity in (1, 2):
        entries = [(parity, a + 1)] + [(i, 1) for i in range(parity + 2, n + 1, 2)]
        entries.append((n + 1, -1))
        ineqs.append(row(entries))
    ineqs = sorted({primitive(r) for r in ineqs})
    return HRepCone(width, tuple(sorted(eqs)), tuple(ineqs))


def make_qab(a: int, b: int) -> LatticePolytope:
    """Fibered octahedron family: edge polytope of K_4 lifted by segments
    of lengths 1, 1, 1, b, b, b with staggered offsets."""
    if a < 1 or b < 1:
        raise InvalidInput("need a >= 1 and b >= 1")
    base = edge_polytope(complete_graph(4))
    segments = {
        (1, 2): (0, 1),
        (2, 3): (0, 1),
        (1, 3): (0, 1),
        (1, 4): (0, b),
        (2, 4): (b + 4 * a + 2, 2 * b + 4 * a + 2),
        (3, 4): (2 * b + 11 * a + 4, 3 * b + 11 * a + 4),
    }
    heights = {}
    for (i, j), seg in segments.items():
        v = [0, 0, 0, 0]
        v[i - 1] = 1
        v[j - 1] = 1
        heights[tuple(v)] = seg
    poly = build_fibration(FiberSpec(base=base, heights=heights))
    poly.degree_hint = 7 * a + 3
    return poly
