"""Closed-form ground truth for the two fibered families.

Everything in this module is direct formula evaluation or explicit
combinatorial construction; nothing here touches the closure engines, so
engine results can be checked against an independent route.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import combinations_with_replacement
from math import comb

from .errors import InvalidInput, PreconditionViolated


def _cycle_edges(k: int):
    n = 2 * k
    return [(i, i + 1) for i in range(1, n)] + [(1, n)]


def _pka_vertex_levels(k: int, a: int):
    """(indicator, lo, hi) per edge of the 2k-cycle; edge (1,2) is lifted
    to [a, a+1], the rest to [0, 1]."""
    out = []
    for i, j in _cycle_edges(k):
        vec = [0] * (2 * k)
        vec[i - 1] = 1
        vec[j - 1] = 1
        lo, hi = (a, a + 1) if (i, j) == (1, 2) else (0, 1)
        out.append((tuple(vec), lo, hi))
    return out


def gap_formula_pka(k: int, a: int, D: int):
    """Gap vector of the fibered even-cycle family, indices 0..D."""
    if k < 2 or a < 0 or D < 0:
        raise InvalidInput("need k >= 2, a >= 0, D >= 0")
    out = [0] * (D + 1)
    for i in range(k, min(a - 2, D) + 1):
        out[i] = (a - i - 1) * comb(i + k - 1, 2 * k - 1)
    return tuple(out)


def holes_pka(k: int, a: int, level: int):
    """Explicit hole set at one degree, from edge-multiset enumeration.

    Each multiset M of level-k cycle edges contributes the fiber interval
    [k+1+h_u(M), a-1+h_l(M)] over the base point 1 + S(M).
    """
    if k < 2 or a < 0:
        raise InvalidInput("need k >= 2 and a >= 0")
    if level < 0:
        raise InvalidInput("level must be nonnegative")
    size = level - k
    if size < 0:
        return ()
    entries = _pka_vertex_levels(k, a)
    pts = set()
    for multi in combinations_with_replacement(range(len(entries)), size):
        base = [1] * (2 * k)
        h_l = h_u = 0
        for idx in multi:
            vec, lo, hi = entries[idx]
            h_l += lo
            h_u += hi
            for j, x in enumerate(vec):
                base[j] += x
        for t in range(k + 1 + h_u, a - 1 + h_l + 1):
            pts.add((level, *base, t))
    return tuple(sorted(pts))


def hilbert_basis_pka(k: int, a: int):
    """Degree-1 vertices plus the interior degree-k points (1,...,1, t)
    with t in [k+1, a-1]."""
    if k < 2 or a < 0:
        raise InvalidInput("need k >= 2 and a >= 0")
    pts = []
    for vec, lo, hi in _pka_vertex_levels(k, a):
        pts.append((1, *vec, lo))
        pts.append((1, *vec, hi))
    ones = (1,) * (2 * k)
    for t in range(k + 1, a):
        pts.append((k, *ones, t))
    return tuple(sorted(pts))


def gap_formula_qab(a: int, b: int, D: int):
    """Gap vector of the fibered octahedron family, indices 0..D.

    Only valid under the hypothesis b > 7a.
    """
    if a < 1 or b < 1 or D < 0:
        raise InvalidInput("need a >= 1, b >= 1, D >= 0")
    if b <= 7 * a:
        raise PreconditionViolated(f"formula requires b > 7a (got b={b}, a={a})")
    out = [0] * (D + 1)
    for d in range(2, D + 1):
        i = d - 2
        out[d] = comb(i + 2, 2) * (max(4 * a - i, 0) + max(7 * a - i, 0))
    return tuple(out)


_QAB_UNIT_EDGES = ((1, 2), (2, 3), (1, 3))


def holes_qab(a: int, b: int, level: int):
    """Explicit hole set at one degree for the fibered octahedron family."""
    if a < 1 or b < 1:
        raise InvalidInput("need a >= 1 and b >= 1")
    if b <= 7 * a:
        raise PreconditionViolated(f"construction requires b > 7a (got b={b}, a={a})")
    if level < 0:
        raise InvalidInput("level must be nonnegative")
    size = level - 2
    if size < 0:
        return ()
    vecs = []
    for i, j in _QAB_UNIT_EDGES:
        v = [0, 0, 0, 0]
        v[i - 1] = 1
        v[j - 1] = 1
        vecs.append(tuple(v))
    pts = set()
    for multi in combinations_with_replacement(range(3), size):
        base = [1, 1, 1, 1]
        for idx in multi:
            for j, x in enumerate(vecs[idx]):
                base[j] += x
        h_l, h_u = 0, size
        first = range(b + 2 + h_u, b + 4 * a + 1 + h_l + 1)
        second = range(2 * b + 4 * a + 4 + h_u, 2 * b + 11 * a + 3 + h_l + 1)
        for t in first:
            pts.add((level, *base, t))
        for t in second:
            pts.add((level, *base, t))
    return tuple(sorted(pts))


@dataclass(frozen=True)
class CorollaryPrediction:
    """Expected dilation behaviour of the a = k+2 even-cycle family."""

    k: int
    s: int
    normal: bool
    mu_hilb: int
    mu_midp: int
    mu_idp: int
    midp_adjusted: bool


def corollary_pka_predicates(k: int, s: int) -> CorollaryPrediction:
    """Normality of the s-th dilation and the dilation invariant triple.

    The dilation is normal iff s does not divide k or s >= k.  The stated
    "smallest non-divisor" value for mu_midp exceeds k when k <= 2, where
    s = k is already normal; the prediction caps it at k and flags the
    adjustment.
    """
    if k < 2 or s < 1:
        raise InvalidInput("need k >= 2 and s >= 1")
    normal = (k % s != 0) or (s >= k)
    smallest_non_divisor = next(t for t in range(2, k + 2) if k % t != 0)
    mu_midp = min(smallest_non_divisor, k)
    largest_proper_divisor = next(k // t for t in range(2, k + 1) if k % t == 0)
    return CorollaryPrediction(
        k=k,
        s=s,
        normal=normal,
        mu_hilb=k,
        mu_midp=mu_midp,
        mu_idp=largest_proper_divisor + 1,
        midp_adjusted=smallest_non_divisor > k,
    )


@dataclass(frozen=True)
class ProductPrediction:
    degree: int
    level: int
    reachable: int
    gap: int


def product_identities(ledger_p, ledger_q):
    """Predicted per-degree counts of a product from its factor ledgers."""
    if ledger_p.max_degree != ledger_q.max_degree:
        raise InvalidInput("factor ledgers must share one degree bound")
    out = []
    for d in range(ledger_p.max_degree + 1):
        level = ledger_p.level_count(d) * ledger_q.level_count(d)
        reach = ledger_p.reachable_count(d) * ledger_q.reachable_count(d)
        out.append(ProductPrediction(degree=d, level=level, reachable=reach,
                                     gap=level - reach))
    return out
