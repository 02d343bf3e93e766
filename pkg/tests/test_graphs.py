import pytest

from latgap.errors import BudgetExceeded, InvalidInput
from latgap.exactlin import rank
from latgap.graphs import (
    Graph,
    complete_graph,
    cycle_graph,
    edge_polytope,
    graph_from_json,
    graph_to_json,
    has_two_disjoint_odd_cycles,
    is_bipartite,
    is_connected,
    is_unimodular_edge_polytope,
    make_graph,
    simple_cycles,
)

BRIDGED_TRIANGLES = make_graph(6, [(1, 2), (2, 3), (1, 3),
                                   (4, 5), (5, 6), (4, 6), (3, 4)])


class TestConstructors:
    @pytest.mark.parametrize("m,edges", [(3, 3), (4, 4), (6, 6)])
    def test_cycle(self, m, edges):
        g = cycle_graph(m)
        assert len(g.edges) == edges
        assert all(len(g.neighbors(v)) == 2 for v in range(1, m + 1))

    def test_cycle_too_small(self):
        with pytest.raises(InvalidInput):
            cycle_graph(2)

    @pytest.mark.parametrize("n,edges", [(1, 0), (3, 3), (4, 6)])
    def test_complete(self, n, edges):
        assert len(complete_graph(n).edges) == edges

    def test_no_loops(self):
        with pytest.raises(InvalidInput):
            make_graph(3, [(1, 1)])

    def test_edge_out_of_range(self):
        with pytest.raises(InvalidInput):
            Graph(n=2, edges=frozenset({(1, 3)}))


class TestEdgePolytope:
    def test_cycle_four_vertices(self):
        p = edge_polytope(cycle_graph(4))
        assert set(p.vertices) == {(1, 1, 0, 0), (0, 1, 1, 0), (0, 0, 1, 1), (1, 0, 0, 1)}

    def test_octahedron(self):
        p = edge_polytope(complete_graph(4))
        assert len(p.vertices) == 6
        assert p.dim == 3

    def test_single_edge_is_point(self):
        p = edge_polytope(make_graph(2, [(1, 2)]))
        assert p.vertices == ((1, 1),)
        assert p.dim == 0

    def test_edgeless_rejected(self):
        with pytest.raises(InvalidInput):
            edge_polytope(complete_graph(1))

    @pytest.mark.parametrize("g,expected", [
        (cycle_graph(4), 4 - 2),
        (cycle_graph(6), 6 - 2),
        (cycle_graph(5), 5 - 1),
        (complete_graph(4), 4 - 1),
        (BRIDGED_TRIANGLES, 6 - 1),
    ])
    def test_affine_dimension(self, g, expected):
        # bipartite connected: |V| - 2; non-bipartite connected: |V| - 1
        p = edge_polytope(g)
        assert rank([(1, *v) for v in p.vertices]) - 1 == expected
        assert is_bipartite(g) == (expected == g.n - 2)


class TestOddCycles:
    def test_bipartite_has_none(self):
        assert [c for c in simple_cycles(cycle_graph(6)) if len(c) % 2] == []
        assert not has_two_disjoint_odd_cycles(cycle_graph(6))

    def test_k4_needs_six_vertices(self):
        assert not has_two_disjoint_odd_cycles(complete_graph(4))

    def test_bridged_triangles(self):
        assert has_two_disjoint_odd_cycles(BRIDGED_TRIANGLES)

    def test_k7_has_them(self):
        assert has_two_disjoint_odd_cycles(complete_graph(7))

    def test_cycle_count_k4(self):
        assert len(simple_cycles(complete_graph(4))) == 7  # 4 triangles + 3 squares

    def test_size_cap(self):
        with pytest.raises(BudgetExceeded):
            has_two_disjoint_odd_cycles(complete_graph(17))


class TestUnimodular:
    @pytest.mark.parametrize("k", [2, 3, 4])
    def test_even_cycles(self, k):
        assert is_unimodular_edge_polytope(cycle_graph(2 * k))

    def test_clique_four(self):
        assert is_unimodular_edge_polytope(complete_graph(4))

    def test_bridged_triangles(self):
        assert not is_unimodular_edge_polytope(BRIDGED_TRIANGLES)

    def test_disconnected_rejected(self):
        g = make_graph(6, [(1, 2), (2, 3), (1, 3), (4, 5), (5, 6), (4, 6)])
        assert not is_connected(g)
        with pytest.raises(InvalidInput):
            is_unimodular_edge_polytope(g)


class TestJson:
    def test_round_trip(self):
        g = BRIDGED_TRIANGLES
        assert graph_from_json(graph_to_json(g)) == g

    def test_malformed(self):
        with pytest.raises(InvalidInput):
            graph_from_json({"edges": [[1, 2]]})


def test_unimodular_implies_zero_gaps_small():
    """Exhaustive over connected graphs on up to 5 vertices (by iso class)."""
    import networkx as nx
    from networkx.generators.atlas import graph_atlas_g

    from latgap.monoid import gap_vector

    checked = 0
    for G in graph_atlas_g():
        n = G.number_of_nodes()
        if not 2 <= n <= 5 or G.number_of_edges() == 0:
            continue
        if not nx.is_connected(G):
            continue
        relabel = {node: i + 1 for i, node in enumerate(sorted(G.nodes()))}
        g = make_graph(n, [(relabel[u], relabel[v]) for u, v in G.edges()])
        if not is_unimodular_edge_polytope(g):
            continue
        assert gap_vector(edge_polytope(g), 4) == (0, 0, 0, 0, 0), g
        checked += 1
    assert checked >= 30
