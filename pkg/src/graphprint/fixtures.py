"""Named graphs used throughout the tests and verification suites."""

from __future__ import annotations

from functools import lru_cache
from importlib import resources

import numpy as np

from .graph import Graph, disjoint_union, glue_pair


def path(n: int, loop_at_end: bool = False) -> Graph:
    """P_n on nodes 0..n-1; optionally with a loop on node ``n-1``.

    Node 0 is the endpoint whose walk labels separate the two variants.
    """
    edges = [(i, i + 1) for i in range(n - 1)]
    if loop_at_end:
        edges.append((n - 1, n - 1))
    return Graph.from_edges(n, edges)


def cycle(n: int) -> Graph:
    return Graph.from_edges(n, [(i, (i + 1) % n) for i in range(n)])


def complete(n: int) -> Graph:
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n)])


def star(leaves: int) -> Graph:
    return Graph.from_edges(leaves + 1, [(0, i) for i in range(1, leaves + 1)])


def figure1() -> tuple[Graph, tuple[int, int]]:
    """11-node graph whose nodes v1 and v5 (ids 0 and 4) have permutation-equal
    walk labels but different single-anchor labels."""
    named = [(k, k + 1) for k in range(1, 8)] + [(1, 8)]
    named += [(x, 10) for x in (1, 2, 5, 6, 7, 9)]
    named += [(2, 11), (4, 11)]
    return Graph.from_edges(11, [(a - 1, b - 1) for a, b in named]), (0, 4)


def shrikhande() -> Graph:
    """Cayley graph on Z4 x Z4 with connection set {±(1,0), ±(0,1), ±(1,1)}."""
    steps = [(1, 0), (0, 1), (1, 1)]
    edges = []
    for a in range(4):
        for b in range(4):
            for da, db in steps:
                edges.append((4 * a + b, 4 * ((a + da) % 4) + (b + db) % 4))
    return Graph.from_edges(16, edges)


def rook(size: int = 4) -> Graph:
    """Rook's graph on a size x size board."""
    edges = []
    for x in range(size * size):
        for y in range(x + 1, size * size):
            if x // size == y // size or x % size == y % size:
                edges.append((x, y))
    return Graph.from_edges(size * size, edges)


def read_matrix_file(text: str) -> tuple[Graph, dict[str, int]]:
    """Parse a ``key=value`` header line followed by rows of a 0/1 matrix."""
    lines = [l for l in text.splitlines() if l.strip()]
    header = dict(tok.split("=") for tok in lines[0].split())
    rows = [[int(x) for x in l.split()] for l in lines[1:]]
    return Graph.from_adjacency(np.array(rows)), {k: int(v) for k, v in header.items()}


@lru_cache(maxsize=None)
def appendix_srg() -> tuple[Graph, int, int]:
    """The (35, 18, 9, 9) strongly regular graph and its two marked nodes."""
    text = resources.files("graphprint").joinpath("data/appendix_srg.txt").read_text()
    g, header = read_matrix_file(text)
    return g, header["u"], header["v"]


@lru_cache(maxsize=None)
def glued_pair() -> tuple[Graph, Graph]:
    g, u, v = appendix_srg()
    return glue_pair(g, u, v)


# polyhedra with one face triple each -----------------------------------------


def prism(k: int) -> Graph:
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges += [(k + i, k + (i + 1) % k) for i in range(k)]
    edges += [(i, k + i) for i in range(k)]
    return Graph.from_edges(2 * k, edges)


def antiprism(k: int) -> Graph:
    edges = [(i, (i + 1) % k) for i in range(k)]
    edges += [(k + i, k + (i + 1) % k) for i in range(k)]
    edges += [(i, k + i) for i in range(k)] + [(i, k + (i + 1) % k) for i in range(k)]
    return Graph.from_edges(2 * k, edges)


def wheel(rim: int) -> Graph:
    edges = [(0, i) for i in range(1, rim + 1)]
    edges += [(i, i % rim + 1) for i in range(1, rim + 1)]
    return Graph.from_edges(rim + 1, edges)


def dodecahedron() -> Graph:
    """Generalised Petersen graph GP(10, 2)."""
    edges = [(i, (i + 1) % 10) for i in range(10)]
    edges += [(i, i + 10) for i in range(10)]
    edges += [(10 + i, 10 + (i + 2) % 10) for i in range(10)]
    return Graph.from_edges(20, edges)


def icosahedron() -> Graph:
    edges = [(0, i) for i in range(1, 6)] + [(11, i) for i in range(6, 11)]
    edges += [(i, i % 5 + 1) for i in range(1, 6)]
    edges += [(5 + i, 5 + i % 5 + 1) for i in range(1, 6)]
    edges += [(i, 5 + i) for i in range(1, 6)] + [(i, 5 + i % 5 + 1) for i in range(1, 6)]
    return Graph.from_edges(12, edges)


def polyhedra() -> dict[str, tuple[Graph, tuple[int, int, int]]]:
    """3-connected planar fixtures, each with three nodes on a common face."""
    out = {"K4": (complete(4), (0, 1, 2))}
    for k in range(3, 7):
        out[f"prism{k}"] = (prism(k), (0, 1, 2))
    for k in range(3, 7):
        out[f"antiprism{k}"] = (antiprism(k), (0, 1, k + 1))
    for r in range(4, 8):
        out[f"wheel{r}"] = (wheel(r), (0, 1, 2))
    out["cube"] = (prism(4), (0, 1, 2))
    out["octahedron"] = (antiprism(3), (0, 1, 4))
    out["dodecahedron"] = (dodecahedron(), (0, 1, 2))
    out["icosahedron"] = (icosahedron(), (0, 1, 2))
    return out


def fixtures() -> dict[str, Graph]:
    """Deterministic catalog of every named graph."""
    cat: dict[str, Graph] = {}
    for n in range(2, 9):
        cat[f"P{n}"] = path(n)
        cat[f"P{n}-loop"] = path(n, loop_at_end=True)
    cat["K3"] = complete(3)
    cat["C5"] = cycle(5)
    cat["C6"] = cycle(6)
    cat["2K3"] = disjoint_union(complete(3), complete(3))
    cat["figure1"] = figure1()[0]
    cat["shrikhande"] = shrikhande()
    cat["rook4"] = rook(4)
    cat["appendix-srg"] = appendix_srg()[0]
    g1, g2 = glued_pair()
    cat["glued-1"] = g1
    cat["glued-2"] = g2
    for name, (g, _) in polyhedra().items():
        cat[name] = g
    return cat
