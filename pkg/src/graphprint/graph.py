"""Undirected graphs with optional loops, plus the structural utilities the
invariants and their oracles are built on."""

from __future__ import annotations

import itertools
from collections import deque
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Sequence

import numpy as np

INFINITE = -1  # distance sentinel for unreachable nodes


class GraphError(ValueError):
    pass


@dataclass(frozen=True)
class Graph:
    """Immutable undirected graph on nodes ``0..n-1``.

    ``adj[i]`` is the sorted tuple of neighbours of ``i`` excluding ``i``
    itself; a loop on ``i`` is recorded in ``loops[i]`` instead.
    """

    n: int
    adj: tuple[tuple[int, ...], ...]
    loops: tuple[bool, ...] = field(default=())

    def __post_init__(self):
        if self.n < 0:
            raise GraphError("negative node count")
        if not self.loops:
            object.__setattr__(self, "loops", (False,) * self.n)
        if len(self.adj) != self.n or len(self.loops) != self.n:
            raise GraphError("adjacency and loop tables must have n entries")
        for i, nbrs in enumerate(self.adj):
            prev = -1
            for j in nbrs:
                if not 0 <= j < self.n:
                    raise GraphError(f"node {j} out of range [0, {self.n})")
                if j == i:
                    raise GraphError("loops belong in the loops table")
                if j <= prev:
                    raise GraphError(f"neighbour list of {i} not strictly sorted")
                prev = j
        for i, nbrs in enumerate(self.adj):
            for j in nbrs:
                if i not in self._nbr_sets[j]:
                    raise GraphError(f"asymmetric edge {i}-{j}")

    @cached_property
    def _nbr_sets(self) -> tuple[frozenset, ...]:
        return tuple(frozenset(a) for a in self.adj)

    # construction ---------------------------------------------------------

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int]]) -> "Graph":
        """Build a graph; ``(i, i)`` is a loop, repeated edges collapse."""
        nbrs: list[set[int]] = [set() for _ in range(n)]
        loops = [False] * n
        for i, j in edges:
            i, j = int(i), int(j)
            if not (0 <= i < n and 0 <= j < n):
                raise GraphError(f"edge ({i}, {j}) out of range for n={n}")
            if i == j:
                loops[i] = True
            else:
                nbrs[i].add(j)
                nbrs[j].add(i)
        return cls(n, tuple(tuple(sorted(s)) for s in nbrs), tuple(loops))

    @classmethod
    def from_adjacency(cls, matrix) -> "Graph":
        a = np.asarray(matrix)
        if a.ndim != 2 or a.shape[0] != a.shape[1]:
            raise GraphError("adjacency matrix must be square")
        if not np.array_equal(a, a.T):
            raise GraphError("adjacency matrix must be symmetric")
        if np.any((a != 0) & (a != 1)):
            raise GraphError("adjacency matrix must be 0/1")
        n = a.shape[0]
        adj = tuple(tuple(int(j) for j in np.flatnonzero(a[i]) if j != i) for i in range(n))
        loops = tuple(bool(a[i, i]) for i in range(n))
        return cls(n, adj, loops)

    # basic queries --------------------------------------------------------

    @property
    def m(self) -> int:
        """Number of non-loop edges."""
        return sum(len(a) for a in self.adj) // 2

    @property
    def has_loops(self) -> bool:
        return any(self.loops)

    def edges(self) -> list[tuple[int, int]]:
        """Non-loop edges as ``(i, j)`` with ``i < j``, sorted."""
        return [(i, j) for i in range(self.n) for j in self.adj[i] if i < j]

    def has_edge(self, i: int, j: int) -> bool:
        if i == j:
            return self.loops[i]
        return j in self._nbr_sets[i]

    def degree(self, i: int) -> int:
        """Size of the neighbour multiset; a loop counts once."""
        return len(self.adj[i]) + int(self.loops[i])

    def degrees(self) -> list[int]:
        return [self.degree(i) for i in range(self.n)]

    def adjacency_matrix(self, dtype=np.int64) -> np.ndarray:
        a = np.zeros((self.n, self.n), dtype=dtype)
        for i, nbrs in enumerate(self.adj):
            a[i, list(nbrs)] = 1
            if self.loops[i]:
                a[i, i] = 1
        return a

    def relabel(self, perm: Sequence[int]) -> "Graph":
        """Return the graph with node ``i`` renamed to ``perm[i]``."""
        perm = [int(p) for p in perm]
        if sorted(perm) != list(range(self.n)):
            raise GraphError("relabeling must be a permutation of the nodes")
        edges = [(perm[i], perm[j]) for i, j in self.edges()]
        edges += [(perm[i], perm[i]) for i in range(self.n) if self.loops[i]]
        return Graph.from_edges(self.n, edges)

    def induced_without(self, removed: Iterable[int]) -> "Graph":
        """Subgraph after deleting ``removed``; survivors keep relative order."""
        gone = set(removed)
        keep = [i for i in range(self.n) if i not in gone]
        index = {v: k for k, v in enumerate(keep)}
        edges = [(index[i], index[j]) for i, j in self.edges() if i in index and j in index]
        edges += [(index[i], index[i]) for i in keep if self.loops[i]]
        return Graph.from_edges(len(keep), edges)

    @cached_property
    def neighbor_table(self) -> np.ndarray:
        """``(n, D)`` int array of neighbour-multiset members padded with ``n``.

        A loop contributes the node itself once, which is how loops enter
        both the refinement recursion and walk counting.
        """
        rows = [list(self.adj[i]) + ([i] if self.loops[i] else []) for i in range(self.n)]
        width = max((len(r) for r in rows), default=0)
        table = np.full((self.n, max(width, 1)), self.n, dtype=np.int64)
        for i, r in enumerate(rows):
            table[i, : len(r)] = r
        return table

    def __repr__(self) -> str:
        loops = sum(self.loops)
        extra = f", loops={loops}" if loops else ""
        return f"Graph(n={self.n}, m={self.m}{extra})"


@dataclass(frozen=True)
class NamedGraph:
    graph: Graph
    id: str
    source: str = ""


# structural utilities -----------------------------------------------------


def complement(g: Graph) -> Graph:
    """Complement on distinct node pairs; loops are carried over unchanged."""
    nbrs = tuple(
        tuple(j for j in range(g.n) if j != i and j not in g._nbr_sets[i]) for i in range(g.n)
    )
    return Graph(g.n, nbrs, g.loops)


def disjoint_union(*graphs: Graph) -> Graph:
    edges, offset = [], 0
    for g in graphs:
        edges += [(i + offset, j + offset) for i, j in g.edges()]
        edges += [(i + offset, i + offset) for i in range(g.n) if g.loops[i]]
        offset += g.n
    return Graph.from_edges(offset, edges)


def glue_pair(g: Graph, u: int, v: int) -> tuple[Graph, Graph]:
    """Glue two copies of ``g`` at ``u`` and ``v``, straight and crossed.

    Copy one keeps its ids. Copy two's remaining nodes follow in original
    order. In the first output the second copies of ``u``/``v`` merge into
    ``u``/``v``; in the second they merge into ``v``/``u``. Edge sets are
    unioned so coincident edges collapse.
    """
    if u == v:
        raise GraphError("glue_pair needs two distinct nodes")
    for x in (u, v):
        if not 0 <= x < g.n:
            raise GraphError(f"node {x} out of range")
    rest = [x for x in range(g.n) if x not in (u, v)]
    shifted = {x: g.n + k for k, x in enumerate(rest)}

    def build(target_u: int, target_v: int) -> Graph:
        second = dict(shifted)
        second[u], second[v] = target_u, target_v
        edges = list(g.edges()) + [(second[i], second[j]) for i, j in g.edges()]
        for x in range(g.n):
            if g.loops[x]:
                edges += [(x, x), (second[x], second[x])]
        return Graph.from_edges(2 * g.n - 2, edges)

    return build(u, v), build(v, u)


def distances(g: Graph, i: int) -> list[int]:
    """BFS hop distances from ``i``; unreachable nodes get ``INFINITE``."""
    dist = [INFINITE] * g.n
    dist[i] = 0
    queue = deque([i])
    while queue:
        x = queue.popleft()
        for y in g.adj[x]:
            if dist[y] == INFINITE:
                dist[y] = dist[x] + 1
                queue.append(y)
    return dist


def diameter(g: Graph) -> float:
    """Largest eccentricity; ``math.inf`` for disconnected graphs."""
    best = 0
    for i in range(g.n):
        d = distances(g, i)
        if INFINITE in d:
            return float("inf")
        best = max(best, max(d))
    return best


def connected_components(g: Graph) -> list[list[int]]:
    seen = [False] * g.n
    comps = []
    for s in range(g.n):
        if seen[s]:
            continue
        comp, stack = [], [s]
        seen[s] = True
        while stack:
            x = stack.pop()
            comp.append(x)
            for y in g.adj[x]:
                if not seen[y]:
                    seen[y] = True
                    stack.append(y)
        comps.append(sorted(comp))
    return comps


def count_components(g: Graph, removed: Iterable[int] = ()) -> int:
    gone = set(removed)
    seen = set(gone)
    count = 0
    for s in range(g.n):
        if s in seen:
            continue
        count += 1
        seen.add(s)
        stack = [s]
        while stack:
            x = stack.pop()
            for y in g.adj[x]:
                if y not in seen:
                    seen.add(y)
                    stack.append(y)
    return count


def is_connected(g: Graph) -> bool:
    return g.n <= 1 or count_components(g) == 1


def find_separators(g: Graph, k: int) -> set[frozenset[int]]:
    """All node sets of size at most ``k`` whose removal adds components.

    Exhaustive over subsets, meant for ``k <= 4`` on small graphs.
    """
    base = count_components(g)
    found = set()
    for size in range(1, min(k, g.n) + 1):
        for subset in itertools.combinations(range(g.n), size):
            if count_components(g, subset) > base:
                found.add(frozenset(subset))
    return found


def is_k_connected(g: Graph, k: int) -> bool:
    if g.n <= k or not is_connected(g):
        return False
    return not find_separators(g, k - 1)


def srg_parameters(g: Graph) -> tuple[int, int, int, int] | None:
    """``(n, d, lambda, mu)`` if ``g`` is strongly regular, else ``None``.

    Loops disqualify. Complete and edgeless graphs leave one of the two
    pair types empty; their unused parameter is reported as 0.
    """
    if g.n == 0 or g.has_loops:
        return None
    d = g.degree(0)
    if any(g.degree(i) != d for i in range(g.n)):
        return None
    lam = mu = None
    sets = g._nbr_sets
    for i in range(g.n):
        for j in range(i + 1, g.n):
            common = len(sets[i] & sets[j])
            if j in sets[i]:
                if lam is None:
                    lam = common
                elif lam != common:
                    return None
            else:
                if mu is None:
                    mu = common
                elif mu != common:
                    return None
    return (g.n, d, lam or 0, mu or 0)


def is_tree(g: Graph) -> bool:
    return not g.has_loops and g.n >= 1 and g.m == g.n - 1 and is_connected(g)
