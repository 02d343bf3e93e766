"""Finite simple graphs, edge polytopes, and the unimodularity criterion.

An edge polytope is the convex hull of the edge indicator vectors of a
graph; for a connected graph it is unimodular exactly when the graph has
no two vertex-disjoint odd cycles.  Odd-cycle detection here is exhaustive
cycle enumeration, capped at 16 vertices.
"""

from __future__ import annotations

from dataclasses import dataclass

from .errors import BudgetExceeded, InvalidInput
from .polytope import LatticePolytope

CYCLE_SEARCH_MAX_VERTICES = 16


@dataclass(frozen=True)
class Graph:
    """Simple undirected graph on vertices 1..n."""

    n: int
    edges: frozenset

    def __post_init__(self):
        if self.n < 0:
            raise InvalidInput("vertex count must be nonnegative")
        for e in self.edges:
            i, j = e
            if not (1 <= i < j <= self.n):
                raise InvalidInput(f"edge {e} out of range or not i < j")

    def neighbors(self, v: int):
        out = []
        for i, j in self.edges:
            if i == v:
                out.append(j)
            elif j == v:
                out.append(i)
        return sorted(out)


def make_graph(n: int, edges) -> Graph:
    """Normalize edge pairs (sorted endpoints, no loops) into a Graph."""
    norm = set()
    for e in edges:
        i, j = int(e[0]), int(e[1])
        if i == j:
            raise InvalidInput("loops are not allowed")
        norm.add((min(i, j), max(i, j)))
    return Graph(n=n, edges=frozenset(norm))


def cycle_graph(m: int) -> Graph:
    if m < 3:
        raise InvalidInput("a cycle needs at least 3 vertices")
    edges = [(i, i + 1) for i in range(1, m)] + [(1, m)]
    return make_graph(m, edges)


def complete_graph(n: int) -> Graph:
    if n < 1:
        raise InvalidInput("need at least one vertex")
    return make_graph(n, [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)])


def is_connected(g: Graph) -> bool:
    if g.n == 0:
        return False
    adj = {v: g.neighbors(v) for v in range(1, g.n + 1)}
    seen = {1}
    stack = [1]
    while stack:
        v = stack.pop()
        for w in adj[v]:
            if w not in seen:
                seen.add(w)
                stack.append(w)
    return len(seen) == g.n


def is_bipartite(g: Graph) -> bool:
    color = {}
    for start in range(1, g.n + 1):
        if start in color:
            continue
        color[start] = 0
        stack = [start]
        while stack:
            v = stack.pop()
            for w in g.neighbors(v):
                if w not in color:
                    color[w] = 1 - color[v]
                    stack.append(w)
                elif color[w] == color[v]:
                    return False
    return True


def edge_polytope(g: Graph) -> LatticePolytope:
    """Convex hull of the edge indicator vectors V(e) in Z^n."""
    if not g.edges:
        raise InvalidInput("edge polytope needs at least one edge")
    verts = []
    for i, j in sorted(g.edges):
        v = [0] * g.n
        v[i - 1] = 1
        v[j - 1] = 1
        verts.append(tuple(v))
    # indicator vectors are always vertices: x_i + x_j is maximized at V(e) alone
    return LatticePolytope(verts, validate=False)


def simple_cycles(g: Graph):
    """All simple cycles as vertex tuples, each listed once.

    Cycles are rooted at their smallest vertex and oriented so the second
    vertex is smaller than the last.
    """
    adj = {v: g.neighbors(v) for v in range(1, g.n + 1)}
    cycles = []
    path = []
    on_path = set()

    def extend(root, v):
        for w in adj[v]:
            if w == root and len(path) >= 3:
                if path[1] < path[-1]:
                    cycles.append(tuple(path))
            elif w > root and w not in on_path:
                path.append(w)
                on_path.add(w)
                extend(root, w)
                path.pop()
                on_path.remove(w)

    for root in range(1, g.n + 1):
        path = [root]
        on_path = {root}
        extend(root, root)
    return cycles


def has_two_disjoint_odd_cycles(g: Graph) -> bool:
    """Exhaustive test for two vertex-disjoint odd cycles."""
    if g.n > CYCLE_SEARCH_MAX_VERTICES:
        raise BudgetExceeded(
            f"cycle search is capped at {CYCLE_SEARCH_MAX_VERTICES} vertices")
    odd = [frozenset(c) for c in simple_cycles(g) if len(c) % 2 == 1]
    odd.sort(key=len)
    for i in range(len(odd)):
        for j in range(i + 1, len(odd)):
            if not odd[i] & odd[j]:
                return True
    return False


def is_unimodular_edge_polytope(g: Graph) -> bool:
    """Whether the edge polytope of a connected graph is unimodular."""
    if not is_connected(g):
        raise InvalidInput("graph must be connected")
    return not has_two_disjoint_odd_cycles(g)


def graph_to_json(g: Graph) -> dict:
    return {"n": g.n, "edges": [list(e) for e in sorted(g.edges)]}


def graph_from_json(data) -> Graph:
    try:
        n = int(data["n"])
        edges = data["edges"]
    except (KeyError, TypeError) as exc:
        raise InvalidInput(f"malformed graph JSON: {exc}") from exc
    return make_graph(n, edges)
