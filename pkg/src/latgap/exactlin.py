"""Exact integer and rational linear algebra.

Everything here works on plain Python ints (arbitrary precision, so there
is no overflow to guard against) and ``fractions.Fraction`` for rational
intermediate values.  The module provides the primitives the rest of the
package is built on: Hermite normal form, saturated integer kernels,
rational solving, Fourier-Motzkin elimination, and the double description
method turning a pointed cone's generators into a facet description.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import gcd

from .errors import InvalidInput, NotPointed

Vec = tuple[int, ...]


def xgcd(a: int, b: int) -> tuple[int, int, int]:
    """Return (x, y, g) with x*a + y*b == g == gcd(a, b), g >= 0."""
    x, nx = 1, 0
    y, ny = 0, 1
    g, ng = a, b
    while ng:
        q = g // ng
        x, nx = nx, x - q * nx
        y, ny = ny, y - q * ny
        g, ng = ng, g - q * ng
    if g < 0:
        x, y, g = -x, -y, -g
    return x, y, g


def primitive(v) -> Vec:
    """Divide an integer vector by the gcd of its entries (zero stays zero)."""
    g = 0
    for x in v:
        g = gcd(g, x)
    if g <= 1:
        return tuple(v)
    return tuple(x // g for x in v)


def canonical_sign(v) -> Vec:
    """Flip the sign so the first nonzero entry is positive."""
    for x in v:
        if x:
            return tuple(v) if x > 0 else tuple(-y for y in v)
    return tuple(v)


def dot(u, v) -> int:
    return sum(a * b for a, b in zip(u, v))


def transpose(rows):
    return [list(col) for col in zip(*rows)]


def hnf(m) -> tuple[list[list[int]], list[list[int]]]:
    """Row-style Hermite normal form.

    Returns (h, u) with u unimodular and u*m == h.  h is in row echelon
    form with positive pivots, zeros below each pivot and entries above a
    pivot reduced into [0, pivot).  Zero rows sit at the bottom.
    """
    h = [list(row) for row in m]
    nr = len(h)
    nc = len(h[0]) if nr else 0
    u = [[1 if i == j else 0 for j in range(nr)] for i in range(nr)]
    r = 0
    for c in range(nc):
        pivot = next((i for i in range(r, nr) if h[i][c]), None)
        if pivot is None:
            continue
        if pivot != r:
            h[r], h[pivot] = h[pivot], h[r]
            u[r], u[pivot] = u[pivot], u[r]
        for i in range(r + 1, nr):
            if not h[i][c]:
                continue
            a, b = h[r][c], h[i][c]
            x, y, g = xgcd(a, b)
            p, q = a // g, b // g
            h[r], h[i] = (
                [x * s + y * t for s, t in zip(h[r], h[i])],
                [-q * s + p * t for s, t in zip(h[r], h[i])],
            )
            u[r], u[i] = (
                [x * s + y * t for s, t in zip(u[r], u[i])],
                [-q * s + p * t for s, t in zip(u[r], u[i])],
            )
        if h[r][c] < 0:
            h[r] = [-x for x in h[r]]
            u[r] = [-x for x in u[r]]
        for i in range(r):
            q = h[i][c] // h[r][c]
            if q:
                h[i] = [s - q * t for s, t in zip(h[i], h[r])]
                u[i] = [s - q * t for s, t in zip(u[i], u[r])]
        r += 1
        if r == nr:
            break
    return h, u


def rank(m) -> int:
    """Exact rank of an integer matrix."""
    if not m:
        return 0
    h, _ = hnf(m)
    return sum(1 for row in h if any(row))


def kernel_basis(m) -> list[Vec]:
    """Basis of the saturated lattice {x in Z^n : m @ x == 0}.

    Rows of the result generate every integer solution, not just a finite
    index sublattice.
    """
    rows = [list(r) for r in m]
    if not rows:
        return []
    n = len(rows[0])
    h, u = hnf(transpose(rows))
    out = [tuple(u[i]) for i in range(n) if not any(h[i])]
    return out


def solve_rational(a_rows, b):
    """One exact solution of a_rows @ x == b, or None if inconsistent.

    Free variables are set to zero; pivoting is by first nonzero entry so
    the result is deterministic.
    """
    m = len(a_rows)
    n = len(a_rows[0]) if m else 0
    aug = [[Fraction(x) for x in row] + [Fraction(bi)] for row, bi in zip(a_rows, b)]
    pivots = []
    row = 0
    for col in range(n):
        piv = next((i for i in range(row, m) if aug[i][col]), None)
        if piv is None:
            continue
        aug[row], aug[piv] = aug[piv], aug[row]
        pv = aug[row][col]
        aug[row] = [x / pv for x in aug[row]]
        for i in range(m):
            if i != row and aug[i][col]:
                f = aug[i][col]
                aug[i] = [x - f * y for x, y in zip(aug[i], aug[row])]
        pivots.append((row, col))
        row += 1
        if row == m:
            break
    for i in range(row, m):
        if aug[i][n]:
            return None
    x = [Fraction(0)] * n
    for r, c in pivots:
        x[c] = aug[r][n]
    return tuple(x)


def scale_to_integer(v) -> Vec:
    """Clear denominators of a rational vector by a positive factor."""
    lcm = 1
    for x in v:
        d = Fraction(x).denominator
        lcm = lcm * d // gcd(lcm, d)
    return tuple(int(Fraction(x) * lcm) for x in v)


def fm_eliminate(ineqs, var: int) -> list[Vec]:
    """Fourier-Motzkin elimination of one coordinate.

    Rows encode homogeneous constraints row . x >= 0; affine systems are
    handled by a homogenizing coordinate.  The returned system (with the
    eliminated coordinate zeroed) describes the projection.  All-zero rows
    are dropped; contradictory constant rows are kept so infeasibility
    stays visible.
    """
    rows = [tuple(r) for r in ineqs]
    if rows:
        width = len(rows[0])
        if any(len(r) != width for r in rows):
            raise InvalidInput("inequality rows must have equal length")
        if not 0 <= var < width:
            raise InvalidInput("variable index out of range")
    zero, pos, neg = [], [], []
    for r in rows:
        c = r[var]
        if c == 0:
            zero.append(r)
        elif c > 0:
            pos.append(r)
        else:
            neg.append(r)
    out = set()
    for r in zero:
        if any(r):
            out.add(primitive(r))
    for p in pos:
        a = p[var]
        for q in neg:
            b = -q[var]
            combo = tuple(b * x + a * y for x, y in zip(p, q))
            if any(combo):
                out.add(primitive(combo))
    return sorted(out)


@dataclass(frozen=True)
class HRepCone:
    """Facet description of a rational cone.

    ``equations`` rows e mean e . x == 0, ``inequalities`` rows n mean
    n . x >= 0.  All normals are primitive; equation signs are canonical.
    """

    dim: int
    equations: tuple[Vec, ...]
    inequalities: tuple[Vec, ...]

    def contains(self, point) -> bool:
        return all(dot(e, point) == 0 for e in self.equations) and all(
            dot(f, point) >= 0 for f in self.inequalities
        )

    def rows(self) -> list[tuple[Vec, bool]]:
        """All constraint rows as (normal, is_equation) pairs."""
        return [(e, True) for e in self.equations] + [
            (f, False) for f in self.inequalities
        ]


def _reduce_mod_lattice(v, lattice_hnf):
    """Canonical coset representative of v modulo the row lattice."""
    v = list(v)
    for row in lattice_hnf:
        p = next((j for j, x in enumerate(row) if x), None)
        if p is None:
            continue
        q = v[p] // row[p]
        if q:
            v = [a - q * b for a, b in zip(v, row)]
    return tuple(v)


def _dual_rays_of_simplex(gens):
    """Primitive rays d_j with d_j . g_i = 0 for i != j and > 0 for i = j."""
    r = len(gens)
    rays = []
    for j in range(r):
        target = [0] * r
        target[j] = 1
        sol = solve_rational(gens, target)
        rays.append(primitive(scale_to_integer(sol)))
    return rays


def double_description(generators) -> HRepCone:
    """Facet description of the pointed cone spanned by integer generators.

    Insertion order is lexicographic and adjacency of dual rays is decided
    by a rank test, so the output is deterministic.  Raises NotPointed when
    the generators span a cone with nontrivial lineality.
    """
    gens = sorted({tuple(g) for g in generators})
    if not gens:
        raise InvalidInput("no generators")
    n = len(gens[0])
    if any(len(g) != n for g in gens):
        raise InvalidInput("generators must have equal length")
    if any(not any(g) for g in gens):
        raise InvalidInput("zero generator")

    eq_rows = kernel_basis(gens)
    if eq_rows:
        h, _ = hnf(eq_rows)
        equations = tuple(canonical_sign(tuple(row)) for row in h if any(row))
    else:
        equations = ()
    eq_hnf = [list(e) for e in equations]

    if equations:
        basis = kernel_basis(equations)
    else:
        basis = [tuple(1 if i == j else 0 for j in range(n)) for i in range(n)]
    r = len(basis)

    coords = []
    for g in gens:
        sol = solve_rational(transpose(basis), g)
        if sol is None or any(x.denominator != 1 for x in sol):
            raise AssertionError("generator outside its saturated span lattice")
        coords.append(tuple(int(x) for x in sol))

    # greedy lex-first independent subset seeds a simplicial dual cone
    chosen: list[int] = []
    for i, c in enumerate(coords):
        if len(chosen) == r:
            break
        if rank([coords[j] for j in chosen] + [c]) > len(chosen):
            chosen.append(i)
    if len(chosen) < r:
        raise InvalidInput("generators do not span their saturation")

    processed = [coords[i] for i in chosen]
    rays = _dual_rays_of_simplex(processed)
    masks = []
    for j in range(r):
        mask = 0
        for i in range(r):
            if i != j:
                mask |= 1 << i
        masks.append(mask)

    for i, c in enumerate(coords):
        if i in chosen:
            continue
        t = len(processed)
        vals = [dot(f, c) for f in rays]
        if all(v >= 0 for v in vals):
            processed.append(c)
            for k, v in enumerate(vals):
                if v == 0:
                    masks[k] |= 1 << t
            continue
        plus = [k for k, v in enumerate(vals) if v > 0]
        zero = [k for k, v in enumerate(vals) if v == 0]
        minus = [k for k, v in enumerate(vals) if v < 0]
        new_rays = []
        for kp in plus:
            for km in minus:
                common = masks[kp] & masks[km]
                tight = [processed[b] for b in range(t) if common >> b & 1]
                if rank(tight) != r - 2:
                    continue
                combo = tuple(
                    vals[kp] * x - vals[km] * y
                    for x, y in zip(rays[km], rays[kp])
                )
                new_rays.append(primitive(combo))
        processed.append(c)
        kept = [(rays[k], masks[k] | (1 << t) if k in zero else masks[k])
                for k in plus + zero]
        ray_set = {f for f, _ in kept}
        for f in new_rays:
            if f not in ray_set:
                ray_set.add(f)
                mask = 0
                for b, pc in enumerate(processed):
                    if dot(f, pc) == 0:
                        mask |= 1 << b
                kept.append((f, mask))
        rays = [f for f, _ in kept]
        masks = [mk for _, mk in kept]

    inequalities = set()
    for f in rays:
        sol = solve_rational(basis, f)
        amb = scale_to_integer(sol)
        amb = _reduce_mod_lattice(amb, eq_hnf)
        inequalities.add(primitive(amb))
    cone = HRepCone(n, equations, tuple(sorted(inequalities)))

    if rank(list(cone.equations) + list(cone.inequalities)) != n:
        raise NotPointed("generators span a cone with nontrivial lineality")
    for g in gens:
        if not cone.contains(g):
            raise AssertionError("double description postcondition failed")
    return cone


def integerize_interval_sum(c: int, intervals, z) -> list[int]:
    """Round interval-constrained rationals to integers with the same sum.

    Given z_i in [a_i, b_i] (integer endpoints) summing to the integer c,
    returns integers z'_i in the same intervals summing to c.  Non-integers
    are processed left to right: each is pushed to the nearest achievable
    integer and the difference is absorbed by the next non-integer.
    """
    if len(intervals) != len(z):
        raise InvalidInput("intervals and values must align")
    zs = [Fraction(x) for x in z]
    for (a, b), x in zip(intervals, zs):
        if not (isinstance(a, int) and isinstance(b, int)):
            raise InvalidInput("interval endpoints must be integers")
        if not (a <= x <= b):
            raise InvalidInput(f"value {x} outside [{a}, {b}]")
    if sum(zs) != c:
        raise InvalidInput("values do not sum to the target")

    while True:
        i = next((k for k, x in enumerate(zs) if x.denominator != 1), None)
        if i is None:
            break
        j = next((k for k in range(i + 1, len(zs)) if zs[k].denominator != 1), None)
        if j is None:
            raise InvalidInput("values do not sum to an integer")
        s = zs[i] + zs[j]
        fl = zs[i].numerator // zs[i].denominator
        ce = fl + 1
        frac = zs[i] - fl
        order = (fl, ce) if frac <= Fraction(1, 2) else (ce, fl)
        a_j, b_j = intervals[j]
        for cand in order:
            rest = s - cand
            if intervals[i][0] <= cand <= intervals[i][1] and a_j <= rest <= b_j:
                zs[i] = Fraction(cand)
                zs[j] = rest
                break
        else:
            raise AssertionError("no achievable rounding; precondition violated")
    return [int(x) for x in zs]
