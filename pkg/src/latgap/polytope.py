"""Lattice polytopes and graded lattice-point enumeration.

A polytope is stored by its vertices (the V-representation is the source
of truth); the facet description of the cone over {1} x P is derived by
double description and cached.  Graded points are plain int tuples whose
0-th coordinate is the degree.  Enumeration is depth-first coordinate
fixing with exact interval bound propagation, so results are canonically
ordered (lexicographic) and independent of any internal scheduling.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction

from .errors import BudgetExceeded, InvalidInput
from .exactlin import (
    HRepCone,
    canonical_sign,
    dot,
    double_description,
    hnf,
    kernel_basis,
    primitive,
    rank,
    solve_rational,
    transpose,
)

GradedPoint = tuple[int, ...]

DEFAULT_BUDGET = 50_000_000


def ceil_div(a: int, b: int) -> int:
    return -((-a) // b)


class LatticePolytope:
    """Convex hull of integer points, all of which must be vertices."""

    __slots__ = ("ambient_dim", "vertices", "fiber_base", "factors",
                 "degree_hint", "_cone", "_dim")

    def __init__(self, vertices, *, ambient_dim=None, validate=True,
                 cone=None, fiber_base=None, factors=None, degree_hint=None):
        verts = sorted({tuple(int(x) for x in v) for v in vertices})
        if not verts:
            raise InvalidInput("a polytope needs at least one vertex")
        dim = len(verts[0]) if ambient_dim is None else ambient_dim
        if any(len(v) != dim for v in verts):
            raise InvalidInput("vertices must share one ambient dimension")
        self.ambient_dim = dim
        self.vertices = tuple(verts)
        self.fiber_base = fiber_base
        self.factors = factors
        self.degree_hint = degree_hint
        self._cone = cone
        self._dim = None
        if validate:
            self._check_vertices()

    @property
    def cone(self) -> HRepCone:
        """Facet description of the cone over {1} x P (cached, write-once)."""
        if self._cone is None:
            self._cone = double_description([(1, *v) for v in self.vertices])
        return self._cone

    @property
    def dim(self) -> int:
        """Affine dimension of the polytope."""
        if self._dim is None:
            self._dim = rank([(1, *v) for v in self.vertices]) - 1
        return self._dim

    def _check_vertices(self):
        cone = self.cone
        full = self.ambient_dim + 1
        base = list(cone.equations)
        for v in self.vertices:
            hv = (1, *v)
            tight = base + [f for f in cone.inequalities if dot(f, hv) == 0]
            if rank(tight) != full - 1:
                raise InvalidInput(f"{v} is not a vertex of the hull")

    def __eq__(self, other):
        return (isinstance(other, LatticePolytope)
                and self.ambient_dim == other.ambient_dim
                and self.vertices == other.vertices)

    def __hash__(self):
        return hash((self.ambient_dim, self.vertices))

    def __repr__(self):
        return (f"LatticePolytope(dim={self.dim}, ambient={self.ambient_dim}, "
                f"vertices={len(self.vertices)})")


def cone_over(p: LatticePolytope) -> HRepCone:
    """H-representation of the cone spanned by (1, v) over the vertices."""
    return p.cone


def _coordinate_boxes(p: LatticePolytope, d: int):
    boxes = []
    for j in range(p.ambient_dim):
        vals = [v[j] for v in p.vertices]
        boxes.append((d * min(vals), d * max(vals)))
    return boxes


def enumerate_lattice_points(equations, inequalities, head, boxes, budget=None):
    """Integer points x with row . (head, x) == 0 / >= 0 within the boxes.

    Depth-first search in coordinate order; bounds for the next coordinate
    come from each constraint with the unfixed coordinates replaced by
    their box interval.  Output is lexicographically sorted by x.
    """
    budget = DEFAULT_BUDGET if budget is None else budget
    n = len(boxes)
    rows = [(tuple(r), True) for r in equations] + \
           [(tuple(r), False) for r in inequalities]
    for coeffs, is_eq in rows:
        if len(coeffs) != n + 1:
            raise InvalidInput("constraint row has wrong width")
        if not any(coeffs[1:]):
            val = coeffs[0] * head
            if (is_eq and val != 0) or (not is_eq and val < 0):
                return []

    nrows = len(rows)
    # suffix ranges of sum(c_i * x_i) over coords with index >= j (1-based j)
    minrest = [[0] * (n + 2) for _ in range(nrows)]
    maxrest = [[0] * (n + 2) for _ in range(nrows)]
    for r, (coeffs, _) in enumerate(rows):
        for j in range(n, 0, -1):
            c = coeffs[j]
            lo, hi = boxes[j - 1]
            a, b = c * lo, c * hi
            minrest[r][j] = minrest[r][j + 1] + min(a, b)
            maxrest[r][j] = maxrest[r][j + 1] + max(a, b)
    touched = [[] for _ in range(n)]
    for r, (coeffs, is_eq) in enumerate(rows):
        for j in range(1, n + 1):
            if coeffs[j]:
                touched[j - 1].append((r, coeffs[j], is_eq))

    partial = [coeffs[0] * head for coeffs, _ in rows]
    out = []
    prefix = [0] * n

    def descend(depth):
        lo, hi = boxes[depth]
        jj = depth + 2  # suffix index of coords strictly beyond this one
        for r, c, is_eq in touched[depth]:
            rhs_low = -partial[r] - maxrest[r][jj]
            if c > 0:
                lo = max(lo, ceil_div(rhs_low, c))
            else:
                hi = min(hi, rhs_low // c)
            if is_eq:
                rhs_high = -partial[r] - minrest[r][jj]
                if c > 0:
                    hi = min(hi, rhs_high // c)
                else:
                    lo = max(lo, ceil_div(rhs_high, c))
            if lo > hi:
                return
        if depth == n - 1:
            if len(out) + (hi - lo + 1) > budget:
                raise BudgetExceeded(f"point budget {budget} exhausted")
            base = tuple(prefix[:depth])
            for x in range(lo, hi + 1):
                out.append(base + (x,))
            return
        rows_here = touched[depth]
        for r, c, _ in rows_here:
            partial[r] += c * lo
        x = lo
        while x <= hi:
            prefix[depth] = x
            descend(depth + 1)
            x += 1
            if x <= hi:
                for r, c, _ in rows_here:
                    partial[r] += c
        for r, c, _ in rows_here:
            partial[r] -= c * hi

    if n == 0:
        return [()]
    descend(0)
    return out


def points_at_degree(p: LatticePolytope, d: int, budget=None):
    """All graded lattice points of the cone over P at degree d, sorted."""
    if d < 0:
        raise InvalidInput("degree must be nonnegative")
    cone = p.cone
    pts = enumerate_lattice_points(cone.equations, cone.inequalities, d,
                                   _coordinate_boxes(p, d), budget)
    return [(d, *x) for x in pts]


def fiber_bounds(cone: HRepCone, prefix):
    """Exact rational bounds of {t : (prefix, t) in cone}, or None if empty.

    ``prefix`` fixes every coordinate except the last one.
    """
    lo, hi = None, None
    for coeffs, is_eq in cone.rows():
        c = coeffs[-1]
        val = dot(coeffs[:-1], prefix)
        if c == 0:
            if (is_eq and val != 0) or (not is_eq and val < 0):
                return None
            continue
        bound = Fraction(-val, c)
        if is_eq:
            if lo is None or bound > lo:
                lo = bound
            if hi is None or bound < hi:
                hi = bound
        elif c > 0:
            if lo is None or bound > lo:
                lo = bound
        else:
            if hi is None or bound < hi:
                hi = bound
    if lo is None or hi is None or lo > hi:
        return None
    return lo, hi


def lattice_fiber(cone: HRepCone, prefix):
    """Integer endpoints of the fiber interval, or None when it has no
    lattice point."""
    bounds = fiber_bounds(cone, prefix)
    if bounds is None:
        return None
    lo = ceil_div(bounds[0].numerator, bounds[0].denominator)
    hi = bounds[1].numerator // bounds[1].denominator
    if lo > hi:
        return None
    return lo, hi


def level_count(p: LatticePolytope, d: int, budget=None) -> int:
    """|L_d|, using product/fibration structure when available."""
    if p.factors:
        total = 1
        for f in p.factors:
            total *= level_count(f, d, budget)
        return total
    if p.fiber_base is not None:
        cone = p.cone
        total = 0
        for base_pt in points_at_degree(p.fiber_base, d, budget):
            iv = lattice_fiber(cone, base_pt)
            if iv is not None:
                total += iv[1] - iv[0] + 1
        return total
    return len(points_at_degree(p, d, budget))


def product(p: LatticePolytope, q: LatticePolytope) -> LatticePolytope:
    """Cartesian product; level sets factor coordinatewise.

    The cone description is the two factor descriptions on disjoint
    coordinate blocks sharing the degree coordinate.
    """
    verts = [v + w for v in p.vertices for w in q.vertices]
    np_, nq = p.ambient_dim, q.ambient_dim
    zp, zq = (0,) * np_, (0,) * nq
    eqs = {canonical_sign(row[:1] + row[1:] + zq) for row in p.cone.equations}
    eqs |= {canonical_sign(row[:1] + zp + row[1:]) for row in q.cone.equations}
    ineqs = {row[:1] + row[1:] + zq for row in p.cone.inequalities}
    ineqs |= {row[:1] + zp + row[1:] for row in q.cone.inequalities}
    cone = HRepCone(np_ + nq, tuple(sorted(eqs)), tuple(sorted(ineqs)))
    factors = (p.factors or (p,)) + (q.factors or (q,))
    hints = [f.degree_hint for f in factors]
    hint = max((h for h in hints if h is not None), default=None)
    return LatticePolytope(verts, validate=False, cone=cone, factors=factors,
                           degree_hint=hint)


def dilate(p: LatticePolytope, s: int) -> LatticePolytope:
    """Scale by a positive integer; L_m of the result is L_{s*m} of P."""
    if s < 1:
        raise InvalidInput("dilation factor must be >= 1")
    if s == 1:
        return p
    verts = [tuple(s * x for x in v) for v in p.vertices]
    eqs = tuple(sorted(canonical_sign(primitive((row[0] * s,) + row[1:]))
                       for row in p.cone.equations))
    ineqs = tuple(sorted(primitive((row[0] * s,) + row[1:])
                         for row in p.cone.inequalities))
    cone = HRepCone(p.ambient_dim, eqs, ineqs)
    fiber_base = dilate(p.fiber_base, s) if p.fiber_base is not None else None
    return LatticePolytope(verts, validate=False, cone=cone,
                           fiber_base=fiber_base, degree_hint=p.degree_hint)


@dataclass(frozen=True)
class FacetSlice:
    """One facet of a polytope with its vertices re-expressed in a lattice
    basis of the facet's affine lattice (a lattice isomorphism)."""

    parent: LatticePolytope
    support: tuple
    vertices: tuple
    polytope: LatticePolytope
    origin: tuple
    basis: tuple


def _induced_slice(p: LatticePolytope, support, tight) -> FacetSlice:
    t0 = tight[0]
    diffs = [tuple(a - b for a, b in zip(t, t0)) for t in tight[1:]]
    diffs = [d for d in diffs if any(d)]
    if diffs:
        normals = kernel_basis(diffs)
        basis = kernel_basis(normals) if normals else \
            [tuple(1 if i == j else 0 for j in range(p.ambient_dim))
             for i in range(p.ambient_dim)]
    else:
        basis = []
    induced = []
    for t in tight:
        diff = tuple(a - b for a, b in zip(t, t0))
        if basis:
            sol = solve_rational(transpose(basis), diff)
            if sol is None or any(x.denominator != 1 for x in sol):
                raise AssertionError("facet lattice basis is not saturated")
            induced.append(tuple(int(x) for x in sol))
        else:
            induced.append(())
    poly = LatticePolytope(induced, ambient_dim=len(basis), validate=False)
    return FacetSlice(parent=p, support=tuple(support), vertices=tuple(tight),
                      polytope=poly, origin=t0, basis=tuple(basis))


def facets(p: LatticePolytope):
    """FacetSlices of the polytope, derived from the cone's facet rows.

    For products the slices are rebuilt as (facet of one factor) x (other
    factors) so the induced polytopes keep their product structure.
    """
    if p.factors:
        out = []
        for i, f in enumerate(p.factors):
            offset = 1 + sum(g.ambient_dim for g in p.factors[:i])
            tail = sum(g.ambient_dim for g in p.factors[i + 1:])
            for fs in facets(f):
                row = fs.support
                support = (row[0],) + (0,) * (offset - 1) + row[1:] + (0,) * tail
                sub = fs.polytope
                combined = None
                for j, g in enumerate(p.factors):
                    part = sub if j == i else g
                    combined = part if combined is None else product(combined, part)
                tight = tuple(v for v in p.vertices
                              if dot(support, (1, *v)) == 0)
                out.append(FacetSlice(parent=p, support=support, vertices=tight,
                                      polytope=combined, origin=(),
                                      basis=()))
        return out
    out = []
    for support in p.cone.inequalities:
        tight = [v for v in p.vertices if dot(support, (1, *v)) == 0]
        if not tight:
            continue
        out.append(_induced_slice(p, support, tight))
    return out


def ehrhart_polynomial(p: LatticePolytope, budget=None):
    """Coefficients (ascending) of the polynomial interpolating |L_d|.

    Interpolates through degrees 0..dim and checks the value at dim+1.
    """
    deg = p.dim
    counts = [level_count(p, d, budget) for d in range(deg + 2)]
    rows = [[Fraction(d) ** i for i in range(deg + 1)] for d in range(deg + 1)]
    coeffs = solve_rational(rows, counts[:deg + 1])
    check = sum(c * Fraction(deg + 1) ** i for i, c in enumerate(coeffs))
    if check != counts[deg + 1]:
        raise AssertionError("level counts are not polynomial of the expected degree")
    return list(coeffs)
