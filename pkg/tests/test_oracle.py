from __future__ import annotations

from collections import defaultdict

import networkx as nx
import pytest
from hypothesis import given, settings

from conftest import graph_and_perm, to_nx
from graphprint import fixtures as fx
from graphprint import oracle as orc
from graphprint.graph import Graph, is_tree


def test_enumeration_counts():
    assert tuple(len(orc.enumerate_graphs(n)) for n in range(8)) == orc.KNOWN_CLASS_COUNTS


def test_enumeration_matches_networkx_atlas(atlas):
    by_n = defaultdict(list)
    for g in atlas:
        by_n[g.n].append(g)
    for n in range(1, 8):
        ours = orc.enumerate_graphs(n)
        assert len(ours) == len(by_n[n])
        buckets = defaultdict(list)
        for g in ours:
            buckets[orc._invariant_key(g)].append(to_nx(g))
        for g in by_n[n]:
            hits = [h for h in buckets[orc._invariant_key(g)] if nx.is_isomorphic(h, to_nx(g))]
            assert len(hits) == 1


def test_find_isomorphism_agrees_with_networkx():
    rng = orc.make_rng(31)
    for _ in range(400):
        g1, g2 = orc.random_pair(rng, 10)
        verdict = orc.brute_force_isomorphic(g1, g2)
        assert bool(verdict) == nx.is_isomorphic(to_nx(g1), to_nx(g2))
        if verdict:
            assert orc.is_isomorphism(g1, g2, verdict.witness)


@given(graph_and_perm(1, 9, loops=True))
@settings(max_examples=100, deadline=None)
def test_relabelled_graphs_found_isomorphic(gp):
    g, perm = gp
    verdict = orc.brute_force_isomorphic(g, g.relabel(perm))
    assert verdict and orc.is_isomorphism(g, g.relabel(perm), verdict.witness)


def test_srg_pair_not_isomorphic():
    assert not orc.brute_force_isomorphic(fx.shrikhande(), fx.rook(4))


def test_brute_force_size_limit():
    big = fx.cycle(orc.MAX_BRUTE_FORCE_NODES + 1)
    with pytest.raises(orc.BoundExceeded):
        orc.brute_force_isomorphic(big, big)


def test_isomorphism_search_budget():
    g1, g2 = fx.shrikhande(), fx.rook(4)
    assert orc.find_isomorphism(g1, g2, budget=1) is None


def test_tree_canonical_against_networkx():
    rng = orc.make_rng(32)
    for _ in range(300):
        n = rng.randint(1, 14)
        t1, t2 = orc.random_tree(n, rng), orc.random_tree(n, rng)
        assert is_tree(t1) and is_tree(t2)
        same = orc.tree_canonical(t1) == orc.tree_canonical(t2)
        assert same == nx.is_isomorphic(to_nx(t1), to_nx(t2))
        assert orc.tree_canonical(t1) == orc.tree_canonical(orc.random_relabel(t1, rng))


def test_tree_canonical_examples():
    assert orc.tree_canonical(fx.path(4)) != orc.tree_canonical(fx.star(3))
    # two centres: the code is the same for either orientation
    assert orc.tree_canonical(fx.path(6)) == orc.tree_canonical(fx.path(6).relabel([5, 4, 3, 2, 1, 0]))
    with pytest.raises(ValueError):
        orc.tree_canonical(fx.cycle(4))


def test_random_generators():
    rng = orc.make_rng(33)
    g = orc.random_gnm(30, 70, rng)
    assert g.n == 30 and g.m == 70 and not g.has_loops
    h = orc.degree_preserving_swap(g, rng, 10)
    assert sorted(h.degrees()) == sorted(g.degrees()) and h.m == g.m
    assert orc.random_graph(10, 0.0, rng).m == 0
    assert orc.random_graph(10, 1.0, rng).m == 45
    assert orc.degree_preserving_swap(Graph.from_edges(3, [(0, 1)]), rng) == Graph.from_edges(3, [(0, 1)])


def test_random_pairs_are_deterministic():
    a = [orc.random_pair(orc.make_rng(5), 8) for _ in range(3)]
    b = [orc.random_pair(orc.make_rng(5), 8) for _ in range(3)]
    assert a == b


def test_dedup_classes():
    graphs = [fx.path(4), fx.path(4).relabel([3, 1, 2, 0]), fx.star(3)]
    assert len(orc.dedup_classes(graphs)) == 2
