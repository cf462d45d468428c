from __future__ import annotations

import networkx as nx
import pytest
from hypothesis import strategies as st

from graphprint.graph import Graph


@st.composite
def graphs(draw, min_n=0, max_n=8, loops=False):
    n = draw(st.integers(min_n, max_n))
    pairs = [(i, j) for i in range(n) for j in range(i + (0 if loops else 1), n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True)) if pairs else []
    return Graph.from_edges(n, chosen)


@st.composite
def graph_and_perm(draw, min_n=1, max_n=8, loops=False):
    g = draw(graphs(min_n, max_n, loops))
    perm = draw(st.permutations(range(g.n)))
    return g, list(perm)


def to_nx(g: Graph) -> nx.Graph:
    h = nx.Graph()
    h.add_nodes_from(range(g.n))
    h.add_edges_from(g.edges())
    h.add_edges_from((i, i) for i in range(g.n) if g.loops[i])
    return h


def from_nx(h) -> Graph:
    index = {v: i for i, v in enumerate(h.nodes)}
    return Graph.from_edges(len(index), [(index[a], index[b]) for a, b in h.edges])


@pytest.fixture(scope="session")
def atlas():
    """networkx graph atlas: every graph on at most 7 nodes, one per class."""
    from networkx.generators.atlas import graph_atlas_g

    return [from_nx(h) for h in graph_atlas_g()]


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    lines = mod.summary_lines() if mod is not None else []
    if lines:
        terminalreporter.write_sep("=", "acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
