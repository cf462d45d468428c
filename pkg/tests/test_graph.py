from __future__ import annotations

import networkx as nx
import numpy as np
import pytest
from hypothesis import given, settings

from conftest import graphs, to_nx
from graphprint import fixtures as fx
from graphprint.graph import (
    Graph,
    GraphError,
    complement,
    connected_components,
    count_components,
    diameter,
    disjoint_union,
    find_separators,
    glue_pair,
    is_connected,
    is_k_connected,
    is_tree,
    srg_parameters,
)


def test_from_edges_normalises_and_records_loops():
    g = Graph.from_edges(3, [(1, 0), (2, 2), (0, 1)])
    assert g.adj == ((1,), (0,), ())
    assert g.loops == (False, False, True)
    assert g.m == 1 and g.has_loops


@pytest.mark.parametrize(
    "n, adj, loops",
    [
        (2, ((1,), ()), ()),  # asymmetric
        (2, ((0,), ()), ()),  # self in adjacency
        (2, ((5,), ()), ()),  # out of range
        (2, ((), ()), (False,)),  # wrong loop table length
    ],
)
def test_invalid_graphs_rejected(n, adj, loops):
    with pytest.raises(GraphError):
        Graph(n, adj, loops)


def test_adjacency_round_trip():
    g = fx.figure1()[0]
    assert Graph.from_adjacency(g.adjacency_matrix()) == g


def test_neighbor_table_padded_with_n():
    tab = fx.star(3).neighbor_table
    assert tab.shape == (4, 3)
    assert tab[1].tolist() == [0, 4, 4]


@given(graphs(0, 9))
@settings(max_examples=150, deadline=None)
def test_components_and_diameter_match_networkx(g):
    h = to_nx(g)
    assert sorted(map(sorted, connected_components(g))) == sorted(sorted(c) for c in nx.connected_components(h))
    # the empty graph counts as connected (networkx refuses to decide)
    assert is_connected(g) == (g.n == 0 or nx.is_connected(h))
    if g.n and nx.is_connected(h):
        assert diameter(g) == nx.diameter(h)


@given(graphs(2, 8))
@settings(max_examples=150, deadline=None)
def test_k_connectivity_matches_networkx(g):
    h = to_nx(g)
    kappa = nx.node_connectivity(h) if nx.is_connected(h) else 0
    for k in (1, 2, 3):
        expected = g.n > k and kappa >= k
        assert is_k_connected(g, k) == expected


@given(graphs(3, 8))
@settings(max_examples=100, deadline=None)
def test_separators_increase_components(g):
    base = count_components(g)
    for sep in find_separators(g, 2):
        assert count_components(g, sep) > base


@given(graphs(0, 8))
@settings(max_examples=100, deadline=None)
def test_complement_involution(g):
    c = complement(g)
    assert complement(c) == g
    assert c.m + g.m == g.n * (g.n - 1) // 2


def test_disjoint_union_and_trees():
    u = disjoint_union(fx.cycle(3), fx.cycle(3))
    assert u.n == 6 and count_components(u) == 2
    assert is_tree(fx.path(5)) and not is_tree(fx.cycle(5)) and not is_tree(u)


def test_srg_parameters_of_fixtures():
    assert srg_parameters(fx.shrikhande()) == (16, 6, 2, 2)
    assert srg_parameters(fx.rook(4)) == (16, 6, 2, 2)
    g, u, v = fx.appendix_srg()
    assert srg_parameters(g) == (35, 18, 9, 9)
    assert g.has_edge(u, v)
    assert srg_parameters(fx.path(4)) is None


def test_glue_pair_degrees():
    g, u, v = fx.appendix_srg()
    g1, g2 = glue_pair(g, u, v)
    for h in (g1, g2):
        deg = np.array(h.degrees())
        assert h.n == 68 and h.m == 629
        assert sorted(set(deg.tolist())) == [18, 35]
    assert g1 != g2


def test_relabel_is_isomorphism():
    g = fx.figure1()[0]
    perm = list(reversed(range(g.n)))
    h = g.relabel(perm)
    assert nx.is_isomorphic(to_nx(g), to_nx(h))
    for i, j in g.edges():
        assert h.has_edge(perm[i], perm[j])
