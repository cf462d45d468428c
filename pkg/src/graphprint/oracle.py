"""Ground truth: backtracking isomorphism, tree canonical forms, small-graph
enumeration and seeded random generators."""

from __future__ import annotations

import itertools
import random
from collections import defaultdict
from dataclasses import dataclass
from typing import Sequence

from .graph import Graph, GraphError, complement, is_tree

KNOWN_CLASS_COUNTS = (1, 1, 2, 4, 11, 34, 156, 1044)
MAX_BRUTE_FORCE_NODES = 24


class BoundExceeded(ValueError):
    pass


@dataclass(frozen=True)
class IsoVerdict:
    isomorphic: bool
    witness: tuple[int, ...] | None = None

    def __bool__(self) -> bool:
        return self.isomorphic


def is_isomorphism(g1: Graph, g2: Graph, mapping: Sequence[int]) -> bool:
    """Whether ``i -> mapping[i]`` carries ``g1`` exactly onto ``g2``."""
    if g1.n != g2.n or sorted(mapping) != list(range(g1.n)):
        return False
    if g1.m != g2.m:
        return False
    for i in range(g1.n):
        if g1.loops[i] != g2.loops[mapping[i]]:
            return False
    return all(g2.has_edge(mapping[i], mapping[j]) for i, j in g1.edges())


def find_isomorphism(
    g1: Graph,
    g2: Graph,
    colors1: Sequence | None = None,
    colors2: Sequence | None = None,
    budget: int | None = None,
) -> list[int] | None:
    """Backtracking search for a colour-preserving isomorphism.

    Nodes may only map to nodes of equal degree, loop flag and colour.
    Returns the mapping, or ``None`` when none exists or when more than
    ``budget`` candidate assignments were tried.
    """
    n = g1.n
    if n != g2.n or g1.m != g2.m:
        return None
    c1 = colors1 if colors1 is not None else [0] * n
    c2 = colors2 if colors2 is not None else [0] * n
    key1 = [(g1.degree(i), g1.loops[i], c1[i]) for i in range(n)]
    key2 = [(g2.degree(i), g2.loops[i], c2[i]) for i in range(n)]
    if sorted(key1) != sorted(key2):
        return None
    if n == 0:
        return []
    classes: dict = defaultdict(list)
    for y in range(n):
        classes[key2[y]].append(y)
    sets2 = [frozenset(a) for a in g2.adj]

    # static order: smallest class first, then most already-placed neighbours
    order: list[int] = []
    placed = [False] * n
    links = [0] * n
    for _ in range(n):
        best = min(
            (x for x in range(n) if not placed[x]),
            key=lambda x: (-links[x], len(classes[key1[x]]), x),
        )
        placed[best] = True
        order.append(best)
        for z in g1.adj[best]:
            links[z] += 1

    mapping = [-1] * n
    used = [False] * n
    cnt1 = [0] * n  # mapped neighbours of each g1 node
    cnt2 = [0] * n  # used neighbours of each g2 node
    tried = 0

    def candidates(x: int) -> list[int]:
        anchor = next((z for z in g1.adj[x] if mapping[z] >= 0), None)
        pool = g2.adj[mapping[anchor]] if anchor is not None else classes[key1[x]]
        out = []
        for y in pool:
            if used[y] or key2[y] != key1[x] or cnt2[y] != cnt1[x]:
                continue
            if all(mapping[z] < 0 or mapping[z] in sets2[y] for z in g1.adj[x]):
                out.append(y)
        return out

    def assign(x: int, y: int, sign: int) -> None:
        mapping[x] = y if sign > 0 else -1
        used[y] = sign > 0
        for z in g1.adj[x]:
            cnt1[z] += sign
        for z in g2.adj[y]:
            cnt2[z] += sign

    stack = [candidates(order[0])]
    while stack:
        depth = len(stack) - 1
        x = order[depth]
        if mapping[x] >= 0:
            assign(x, mapping[x], -1)
        if not stack[-1]:
            stack.pop()
            continue
        y = stack[-1].pop()
        tried += 1
        if budget is not None and tried > budget:
            return None
        assign(x, y, +1)
        if depth + 1 == n:
            return list(mapping)
        stack.append(candidates(order[depth + 1]))
    return None


def brute_force_isomorphic(g1: Graph, g2: Graph, max_nodes: int = MAX_BRUTE_FORCE_NODES) -> IsoVerdict:
    if max(g1.n, g2.n) > max_nodes:
        raise BoundExceeded(f"brute force is limited to {max_nodes} nodes")
    mapping = find_isomorphism(g1, g2)
    if mapping is None:
        return IsoVerdict(False)
    if not is_isomorphism(g1, g2, mapping):
        raise AssertionError("search returned an invalid witness")
    return IsoVerdict(True, tuple(mapping))


# trees -------------------------------------------------------------------------------


def _centers(g: Graph) -> list[int]:
    degree = [len(a) for a in g.adj]
    leaves = [i for i in range(g.n) if degree[i] <= 1]
    remaining = g.n
    while remaining > 2:
        remaining -= len(leaves)
        nxt = []
        for leaf in leaves:
            for z in g.adj[leaf]:
                degree[z] -= 1
                if degree[z] == 1:
                    nxt.append(z)
        leaves = nxt
    return leaves


def _rooted_code(g: Graph, root: int) -> bytes:
    parent = {root: -1}
    order = [root]
    for x in order:
        for z in g.adj[x]:
            if z not in parent:
                parent[z] = x
                order.append(z)
    codes: dict[int, bytes] = {}
    for x in reversed(order):
        kids = sorted(codes.pop(z) for z in g.adj[x] if parent.get(z) == x)
        codes[x] = b"(" + b"".join(kids) + b")"
    return codes[root]


def tree_canonical(g: Graph) -> bytes:
    """Parenthesis encoding rooted at the centre (smaller of two centres'
    encodings for bicentral trees)."""
    if not is_tree(g):
        raise GraphError("tree_canonical needs a loop-free connected graph with n-1 edges")
    return min(_rooted_code(g, c) for c in _centers(g))


# enumeration -----------------------------------------------------------------------------


def _invariant_key(g: Graph) -> tuple:
    deg = g.degrees()
    sets = g._nbr_sets
    tri = [sum(1 for a, b in itertools.combinations(g.adj[i], 2) if b in sets[a]) for i in range(g.n)]
    profile = sorted((deg[i], tri[i], tuple(sorted(deg[j] for j in g.adj[i]))) for i in range(g.n))
    return (g.m, tuple(profile))


def dedup_classes(graphs: Sequence[Graph]) -> list[Graph]:
    """One representative per isomorphism class, in first-seen order."""
    buckets: dict[tuple, list[Graph]] = defaultdict(list)
    out = []
    for g in graphs:
        bucket = buckets[_invariant_key(g)]
        if any(find_isomorphism(g, h) is not None for h in bucket):
            continue
        bucket.append(g)
        out.append(g)
    return out


_CLASS_CACHE: dict[int, list[Graph]] = {}


def enumerate_graphs(n: int) -> list[Graph]:
    """All loop-free graphs on ``n <= 7`` nodes, one per isomorphism class.

    Classes on ``n`` nodes come from adding a vertex to every class on
    ``n-1`` nodes in every possible way. Only candidates with at most half
    of the possible edges are deduplicated; the rest are their complements.
    """
    if n < 0 or n >= len(KNOWN_CLASS_COUNTS):
        raise BoundExceeded(f"exhaustive enumeration is limited to n <= {len(KNOWN_CLASS_COUNTS) - 1}")
    if n in _CLASS_CACHE:
        return list(_CLASS_CACHE[n])
    if n <= 1:
        result = [Graph.from_edges(n, [])]
    else:
        pairs = n * (n - 1) // 2
        candidates = []
        for g in enumerate_graphs(n - 1):
            base = g.edges()
            for r in range(n):
                for subset in itertools.combinations(range(n - 1), r):
                    if 2 * (g.m + r) <= pairs:
                        candidates.append(Graph.from_edges(n, base + [(x, n - 1) for x in subset]))
        light = dedup_classes(candidates)
        result = light + [complement(g) for g in light if 2 * g.m < pairs]
        result.sort(key=lambda g: (g.m, sorted(g.degrees())))
    if len(result) != KNOWN_CLASS_COUNTS[n]:
        raise AssertionError(f"found {len(result)} classes on {n} nodes, expected {KNOWN_CLASS_COUNTS[n]}")
    _CLASS_CACHE[n] = result
    return list(result)


# random generators ----------------------------------------------------------------------------


def make_rng(seed: int) -> random.Random:
    return random.Random(seed & ((1 << 64) - 1))


def random_graph(n: int, p: float, rng: random.Random) -> Graph:
    """Erdos-Renyi G(n, p)."""
    return Graph.from_edges(n, [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p])


def random_gnm(n: int, m: int, rng: random.Random) -> Graph:
    """Uniform graph with exactly ``m`` edges."""
    pairs = n * (n - 1) // 2
    if m > pairs:
        raise ValueError("too many edges")
    chosen = rng.sample(range(pairs), m)
    edges = []
    for code in chosen:
        # invert the row-major enumeration of pairs i < j
        i = 0
        while code >= n - 1 - i:
            code -= n - 1 - i
            i += 1
        edges.append((i, i + 1 + code))
    return Graph.from_edges(n, edges)


def random_tree(n: int, rng: random.Random) -> Graph:
    """Uniform labelled tree from a random Pruefer sequence."""
    if n <= 2:
        return Graph.from_edges(n, [(0, 1)] if n == 2 else [])
    seq = [rng.randrange(n) for _ in range(n - 2)]
    degree = [1] * n
    for x in seq:
        degree[x] += 1
    edges = []
    for x in seq:
        leaf = min(i for i in range(n) if degree[i] == 1)
        edges.append((leaf, x))
        degree[leaf] -= 1
        degree[x] -= 1
    u, v = [i for i in range(n) if degree[i] == 1]
    edges.append((u, v))
    return Graph.from_edges(n, edges)


def random_relabel(g: Graph, rng: random.Random) -> Graph:
    perm = list(range(g.n))
    rng.shuffle(perm)
    return g.relabel(perm)


def degree_preserving_swap(g: Graph, rng: random.Random, swaps: int = 1) -> Graph:
    """Apply up to ``swaps`` double-edge swaps (keeps the degree sequence)."""
    edges = set(g.edges())
    for _ in range(swaps if len(edges) >= 2 else 0):
        for _attempt in range(50):
            (a, b), (c, d) = rng.sample(sorted(edges), 2)
            if len({a, b, c, d}) < 4:
                continue
            if rng.random() < 0.5:
                c, d = d, c
            e1, e2 = (min(a, c), max(a, c)), (min(b, d), max(b, d))
            if e1 in edges or e2 in edges:
                continue
            edges -= {(a, b), (min(c, d), max(c, d))}
            edges |= {e1, e2}
            break
    loops = [(i, i) for i in range(g.n) if g.loops[i]]
    return Graph.from_edges(g.n, sorted(edges) + loops)


def random_pair(rng: random.Random, n_max: int, n_min: int = 2) -> tuple[Graph, Graph]:
    """A pair of same-size graphs drawn from a mix designed to include hard
    cases: relabelled copies, degree-preserving perturbations and
    independent samples."""
    n = rng.randint(n_min, n_max)
    p = rng.choice((0.2, 0.5, 0.8))
    g = random_graph(n, p, rng)
    kind = rng.randrange(4)
    if kind == 0:
        h = random_relabel(g, rng)
    elif kind == 1:
        h = random_relabel(degree_preserving_swap(g, rng, rng.randint(1, 3)), rng)
    elif kind == 2:
        h = random_relabel(random_graph(n, p, rng), rng)
    else:
        h = random_gnm(n, g.m, rng)
    return g, h
