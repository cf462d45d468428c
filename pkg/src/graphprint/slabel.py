"""Anchored neighbourhood aggregation labels and the fingerprints built on them.

A labelling run fixes ``k`` distinct anchor nodes. Anchor ``q`` (1-based)
starts with label ``q``, every other node with ``0``. Each step replaces a
node's label by the pair (own previous label, multiset of the neighbours'
previous labels). Because every label nests its own history, a run is
summarised by the multiset of its final-column labels.

Two interchangeable back ends evaluate the same recursion:

* exact: labels are interned to small integers by an :class:`Interner`;
  two graphs compared through one interner get equal ids exactly when the
  nested structures are equal.
* hashed: labels are 64-bit structural digests, computed with no shared
  state.

Graph-level fingerprints fold the per-tuple values into nested multisets,
either anchor-first (family ``s``) or focal-node-first (family ``t``).
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from typing import Iterable, Sequence

import numpy as np

from . import hashing
from .graph import Graph

FULL = "full"
STABLE = "stable"
ITER_BUDGETS = (FULL, STABLE)
EXACT = "exact"
HASHED = "hashed"
MODES = (EXACT, HASHED)
FAMILIES = ("s", "t")

_CHUNK_CELLS = 1 << 22
_BIG = np.iinfo(np.int64).max


class LabelError(ValueError):
    pass


def _unique_rows(rows: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    rows = np.ascontiguousarray(rows)
    if rows.shape[0] == 0:
        return rows, np.zeros(0, dtype=np.int64)
    view = rows.view(np.dtype((np.void, rows.dtype.itemsize * rows.shape[1]))).ravel()
    _, first, inverse = np.unique(view, return_index=True, return_inverse=True)
    return rows[first], inverse.ravel()


class Interner:
    """Append-only map from label structures to small integers.

    Seed values ``0..seed_limit-1`` are their own ids; every structure seen
    afterwards gets the next free integer. Ids are only meaningful within
    one interner, so exact comparisons must share it.
    """

    def __init__(self, seed_limit: int = 64):
        self.base = seed_limit
        self._ids: dict[bytes, int] = {}
        self._keys: list[bytes] = []
        self._wide: dict[int, bytes] = {}

    def __len__(self) -> int:
        return len(self._keys)

    def intern(self, key: bytes) -> int:
        got = self._ids.get(key)
        if got is None:
            got = self.base + len(self._keys)
            self._ids[key] = got
            self._keys.append(key)
        return got

    def intern_rows(self, tag: bytes, rows: np.ndarray, skip_negative: bool = False) -> np.ndarray:
        """Intern every row of a 2-D int64 array; returns one id per row."""
        uniq, inverse = _unique_rows(np.asarray(rows, dtype=np.int64))
        ids = np.empty(len(uniq), dtype=np.int64)
        intern = self.intern
        if skip_negative:
            for r, row in enumerate(uniq):
                ids[r] = intern(tag + row[row >= 0].tobytes())
        else:
            for r, row in enumerate(uniq):
                ids[r] = intern(tag + row.tobytes())
        return ids[inverse]

    def structure(self, label: int) -> tuple[bytes, tuple[int, ...]]:
        """``(tag, members)`` for an interned id; seeds return ``(b"", (p,))``."""
        if label < self.base:
            return b"", (label,)
        key = self._keys[label - self.base]
        tag_len = 1 if key[:1] in (b"N", b"M", b"U") else 2
        members = np.frombuffer(key[tag_len:], dtype=np.int64)
        return key[:tag_len], tuple(int(x) for x in members)

    def wide_digest(self, label: int) -> bytes:
        """Canonical SHA-256 of the nested structure behind ``label``.

        Independent of id assignment order: members are ordered by their own
        digests, never by id.
        """
        done = self._wide
        stack = [label]
        while stack:
            top = stack[-1]
            if top in done:
                stack.pop()
                continue
            tag, members = self.structure(top)
            if not tag:
                done[top] = hashing.wide_hash(b"seed", members[0].to_bytes(8, "big"))
                stack.pop()
                continue
            missing = [x for x in members if x not in done]
            if missing:
                stack.extend(missing)
                continue
            if tag == b"N":
                parts = [done[members[0]]] + sorted(done[x] for x in members[1:])
            else:
                parts = sorted(done[x] for x in members)
            done[top] = hashing.wide_hash(tag, *parts)
            stack.pop()
        return done[label]


# anchored refinement ------------------------------------------------------------


def _check_anchors(g: Graph, anchors: Sequence[int]) -> tuple[int, ...]:
    anchors = tuple(int(a) for a in anchors)
    if len(set(anchors)) != len(anchors):
        raise LabelError(f"anchors must be distinct, got {anchors}")
    for a in anchors:
        if not 0 <= a < g.n:
            raise LabelError(f"anchor {a} out of range for n={g.n}")
    return anchors


def _seed_matrix(n: int, tuples: np.ndarray) -> np.ndarray:
    seeds = np.zeros((tuples.shape[0], n), dtype=np.int64)
    rows = np.arange(tuples.shape[0])
    for q in range(tuples.shape[1]):
        seeds[rows, tuples[:, q]] = q + 1
    return seeds


def _class_counts(labels: np.ndarray) -> np.ndarray:
    s = np.sort(labels, axis=1)
    return 1 + np.count_nonzero(s[:, 1:] != s[:, :-1], axis=1)


def _degree_counts(g: Graph) -> np.ndarray:
    return np.array(g.degrees(), dtype=np.int64)


def _refine_batch(
    g: Graph,
    tuples: np.ndarray,
    budget: str,
    mode: str,
    interner: Interner | None,
    steps: int | None = None,
) -> np.ndarray:
    """Final node labels ``(T, n)`` for a batch of anchor tuples.

    ``budget == FULL`` runs ``steps`` (default ``n``) refinement steps.
    ``budget == STABLE`` stops each tuple at the first step whose partition
    equals the previous one and reports the labels of that step.
    """
    n = g.n
    steps = n if steps is None else steps
    table = g.neighbor_table
    width = table.shape[1]
    seeds = _seed_matrix(n, tuples)
    if mode == EXACT:
        labels = seeds
        pad_col = np.full((1, 1), -1, dtype=np.int64)
    else:
        labels = hashing.seed_digests(seeds)
        pad_col = np.full((1, 1), hashing.PAD, dtype=np.uint64)
        counts = _degree_counts(g)[None, :]

    final = labels.copy()
    active = np.arange(labels.shape[0])
    prev_classes = _class_counts(labels) if budget == STABLE else None
    for _ in range(steps):
        if active.size == 0:
            break
        cur = labels[active]
        ext = np.concatenate([cur, np.repeat(pad_col, cur.shape[0], axis=0)], axis=1)
        gathered = ext[:, table]
        gathered.sort(axis=2)
        if mode == EXACT:
            rows = np.concatenate([cur[:, :, None], gathered], axis=2).reshape(-1, width + 1)
            new = interner.intern_rows(b"N", rows, skip_negative=True).reshape(cur.shape)
        else:
            new = hashing.node_digests(cur, gathered, counts)
        labels[active] = new
        if budget == STABLE:
            classes = _class_counts(new)
            done = classes == prev_classes[active]
            final[active[done]] = new[done]
            prev_classes[active] = classes
            active = active[~done]
    if budget == FULL:
        final = labels
    return final


def _chunks(tuples: np.ndarray, n: int, width: int) -> Iterable[np.ndarray]:
    per = max(1, _CHUNK_CELLS // max(1, n * (width + 1)))
    for start in range(0, tuples.shape[0], per):
        yield tuples[start : start + per]


def _final_labels(g, tuples, budget, mode, interner) -> np.ndarray:
    width = g.neighbor_table.shape[1]
    parts = [_refine_batch(g, c, budget, mode, interner) for c in _chunks(tuples, g.n, width)]
    if not parts:
        dtype = np.int64 if mode == EXACT else np.uint64
        return np.zeros((0, g.n), dtype=dtype)
    return np.concatenate(parts, axis=0)


def _tuple_values(g, tuples, budget, mode, interner) -> np.ndarray:
    """One value per tuple: the multiset of its final-column labels."""
    width = g.neighbor_table.shape[1]
    out = []
    for c in _chunks(tuples, g.n, width):
        final = _refine_batch(g, c, budget, mode, interner)
        if mode == EXACT:
            out.append(interner.intern_rows(b"M", np.sort(final, axis=1)))
        else:
            out.append(hashing.fold_rows(hashing.TAG_TUPLE, final))
    dtype = np.int64 if mode == EXACT else np.uint64
    return np.concatenate(out) if out else np.zeros(0, dtype=dtype)


def refine(
    g: Graph,
    anchors: Sequence[int] = (),
    iters: int | None = None,
    interner: Interner | None = None,
) -> list[np.ndarray]:
    """Label columns ``0..iters`` for one anchor tuple (exact mode).

    ``iters`` defaults to ``n``, i.e. ``n + 1`` columns.
    """
    anchors = _check_anchors(g, anchors)
    iters = g.n if iters is None else int(iters)
    if iters < 1:
        raise LabelError("iteration count must be at least 1")
    interner = interner if interner is not None else Interner()
    tuples = np.array([anchors], dtype=np.int64).reshape(1, len(anchors))
    columns = [_seed_matrix(g.n, tuples)[0]]
    for _ in range(iters):
        prev = columns[-1][None, :]
        columns.append(_refine_batch_from(g, prev, interner)[0])
    return columns


def _refine_batch_from(g: Graph, labels: np.ndarray, interner: Interner) -> np.ndarray:
    """Single exact refinement step applied to given labels."""
    table = g.neighbor_table
    ext = np.concatenate([labels, np.full((labels.shape[0], 1), -1, dtype=np.int64)], axis=1)
    gathered = ext[:, table]
    gathered.sort(axis=2)
    rows = np.concatenate([labels[:, :, None], gathered], axis=2).reshape(-1, table.shape[1] + 1)
    return interner.intern_rows(b"N", rows, skip_negative=True).reshape(labels.shape)


def stabilization_hint(columns: Sequence[np.ndarray]) -> int:
    """First column index whose partition the next column no longer refines."""
    for l in range(len(columns) - 1):
        a, b = np.asarray(columns[l]), np.asarray(columns[l + 1])
        if len(np.unique(a)) == len(np.unique(b)):
            return l
    return len(columns) - 1


def tuple_label(
    g: Graph,
    anchors: Sequence[int],
    mode: str = EXACT,
    interner: Interner | None = None,
    iters: str = FULL,
) -> int:
    """Canonical value of one anchored labelling run.

    Exact mode returns an interner id (compare only under a shared
    interner); hashed mode returns the 64-bit digest.
    """
    anchors = _check_anchors(g, anchors)
    _check_mode(mode, iters)
    tuples = np.array([anchors], dtype=np.int64).reshape(1, len(anchors))
    if mode == EXACT:
        interner = interner if interner is not None else Interner()
    return int(_tuple_values(g, tuples, iters, mode, interner)[0])


def _check_mode(mode: str, iters: str) -> None:
    if mode not in MODES:
        raise LabelError(f"mode must be one of {MODES}, got {mode!r}")
    if iters not in ITER_BUDGETS:
        raise LabelError(f"iteration budget must be one of {ITER_BUDGETS}, got {iters!r}")


# nested aggregation ---------------------------------------------------------------


def _extensions(n: int, prefixes: Sequence[tuple[int, ...]], k: int) -> np.ndarray:
    """All length-``k`` tuples extending each prefix, grouped lexicographically."""
    rows = []
    for p in prefixes:
        rest = [x for x in range(n) if x not in p]
        for ext in itertools.permutations(rest, k - len(p)):
            rows.append(p + ext)
    return np.array(rows, dtype=np.int64).reshape(len(rows), k)


def _fold(values: np.ndarray, group: int, mode: str, interner: Interner | None, tag: bytes, htag: int):
    rows = values.reshape(-1, group)
    if mode == EXACT:
        return interner.intern_rows(tag, np.sort(rows, axis=1))
    return hashing.fold_rows(htag, rows)


def s_values(
    g: Graph,
    k: int,
    prefixes: Sequence[tuple[int, ...]] = ((),),
    mode: str = EXACT,
    interner: Interner | None = None,
    iters: str = FULL,
) -> np.ndarray:
    """Nested anchor-first aggregates for each prefix (all of equal length).

    With the default single empty prefix this is the graph-level value.
    """
    _check_mode(mode, iters)
    prefixes = [tuple(int(x) for x in p) for p in prefixes]
    q = len(prefixes[0]) if prefixes else 0
    if any(len(p) != q for p in prefixes):
        raise LabelError("prefixes must share one length")
    if not 0 <= q <= k <= g.n:
        raise LabelError(f"need 0 <= prefix length <= k <= n, got {q}, {k}, {g.n}")
    for p in prefixes:
        _check_anchors(g, p)
    if mode == EXACT and interner is None:
        interner = Interner()
    tuples = _extensions(g.n, prefixes, k)
    values = _tuple_values(g, tuples, iters, mode, interner)
    for r in range(k - 1, q - 1, -1):
        values = _fold(values, g.n - r, mode, interner, b"S" + bytes([r]), hashing.TAG_SFOLD + r)
    return values


def t_values(g: Graph, k: int, mode: str = EXACT, interner: Interner | None = None) -> int:
    """Graph-level focal-node-first aggregate (always the full budget)."""
    _check_mode(mode, FULL)
    if not 0 <= k < g.n:
        raise LabelError(f"t-aggregation needs 0 <= k < n, got k={k}, n={g.n}")
    if mode == EXACT and interner is None:
        interner = Interner()
    n = g.n
    tuples = _extensions(n, [()], k)
    leaves = _final_labels(g, tuples, FULL, mode, interner)  # (T, n)
    sentinel = _BIG if mode == EXACT else hashing.PAD
    for r in range(k - 1, -1, -1):
        c = n - r
        arr = leaves.reshape(-1, c, n)
        anchor = tuples[:, r].reshape(-1, c)
        masked = np.where(anchor[:, :, None] == np.arange(n)[None, None, :], sentinel, arr)
        masked = np.sort(masked, axis=1)[:, : c - 1, :]
        rows = np.ascontiguousarray(masked.transpose(0, 2, 1)).reshape(-1, c - 1)
        if mode == EXACT:
            leaves = interner.intern_rows(b"T" + bytes([r]), rows).reshape(-1, n)
        else:
            leaves = hashing.fold_rows(hashing.TAG_TFOLD + r, rows).reshape(-1, n)
        tuples = tuples[::c, :r]
    top = leaves.reshape(1, n)
    if mode == EXACT:
        return int(interner.intern_rows(b"U", np.sort(top, axis=1))[0])
    return int(hashing.fold_rows(hashing.TAG_TTOP, top)[0])


@dataclass(frozen=True)
class Fingerprint:
    """Graph fingerprint plus the method that produced it.

    Text form: ``family k iters mode hashver digest64hex [widehex]``.
    """

    family: str
    k: int
    iters: str
    mode: str
    hash_version: str
    digest64: int
    wide: bytes | None = None

    @property
    def method(self) -> str:
        return f"{self.family} {self.k} {self.iters} {self.mode} {self.hash_version}"

    def to_line(self) -> str:
        line = f"{self.method} {hashing.hex64(self.digest64)}"
        if self.wide is not None:
            line += " " + self.wide.hex()
        return line

    @classmethod
    def from_line(cls, line: str) -> "Fingerprint":
        parts = line.split()
        if len(parts) not in (6, 7):
            raise ValueError(f"malformed fingerprint line {line!r}")
        family, k, iters, mode, ver, d64 = parts[:6]
        wide = bytes.fromhex(parts[6]) if len(parts) == 7 else None
        return cls(family, int(k), iters, mode, ver, int(d64, 16), wide)

    def matches(self, other: "Fingerprint") -> bool:
        """Candidate equality: same method, same 64-bit digest, and same wide
        digest whenever both sides carry one."""
        if self.method != other.method or self.digest64 != other.digest64:
            return False
        if self.wide is not None and other.wide is not None:
            return self.wide == other.wide
        return True

    def __str__(self) -> str:
        return self.to_line()


def _wide_value(g: Graph, family: str, k: int, iters: str) -> bytes:
    interner = Interner()
    if family == "s":
        label = int(s_values(g, k, mode=EXACT, interner=interner, iters=iters)[0])
    else:
        label = t_values(g, k, mode=EXACT, interner=interner)
    return interner.wide_digest(label)


def fingerprint(
    g: Graph,
    k: int,
    family: str = "s",
    mode: str = HASHED,
    iters: str = FULL,
    wide: bool = False,
) -> Fingerprint:
    """Fingerprint of ``g``.

    Hashed mode gives a 64-bit digest and, with ``wide=True``, also the
    SHA-256 digest. Exact mode always carries the SHA-256 digest of the
    interned structure and uses its first 8 bytes as the 64-bit field.
    """
    if family not in FAMILIES:
        raise LabelError(f"family must be one of {FAMILIES}")
    _check_mode(mode, iters)
    if family == "t" and iters != FULL:
        raise LabelError("t-aggregation is only defined for the full iteration budget")
    if mode == EXACT:
        w = _wide_value(g, family, k, iters)
        return Fingerprint(family, k, iters, mode, hashing.HASH_VERSION, int.from_bytes(w[:8], "big"), w)
    if family == "s":
        d = int(s_values(g, k, mode=HASHED, iters=iters)[0])
    else:
        d = t_values(g, k, mode=HASHED)
    w = _wide_value(g, family, k, iters) if wide else None
    return Fingerprint(family, k, iters, mode, hashing.HASH_VERSION, d, w)


def fingerprint_s(g: Graph, k: int, mode: str = HASHED, iters: str = FULL, wide: bool = False) -> Fingerprint:
    return fingerprint(g, k, "s", mode, iters, wide)


def fingerprint_t(g: Graph, k: int, mode: str = HASHED, wide: bool = False) -> Fingerprint:
    return fingerprint(g, k, "t", mode, FULL, wide)


# exact pairwise decisions ------------------------------------------------------------


def _same_multiset(a, b) -> bool:
    return sorted(np.asarray(a).tolist()) == sorted(np.asarray(b).tolist())


def node_aggregates(g: Graph, k: int, interner: Interner, iters: str = FULL, nodes=None) -> np.ndarray:
    """Per-node anchor-first aggregates ``s^k(v)`` (exact ids), ``k >= 1``."""
    nodes = range(g.n) if nodes is None else nodes
    return s_values(g, k, [(v,) for v in nodes], EXACT, interner, iters)


def _anchor_free_labels(g: Graph, interner: Interner, iters: str) -> np.ndarray:
    return _final_labels(g, np.zeros((1, 0), dtype=np.int64), iters, EXACT, interner)[0]


def s_equivalent(
    g1: Graph,
    g2: Graph,
    k: int,
    iters: str = FULL,
    interner: Interner | None = None,
) -> bool:
    """Exact anchor-first equivalence through one shared interner.

    Nodes are bucketed by their ``(k-1)``-level aggregate (which the
    ``k``-level aggregate determines), and buckets are compared smallest
    first so a mismatch exits early.
    """
    _check_mode(EXACT, iters)
    if g1.n != g2.n:
        return False
    if k > g1.n:
        raise LabelError(f"k={k} exceeds node count {g1.n}")
    if sorted(g1.degrees()) != sorted(g2.degrees()):
        return False
    interner = interner if interner is not None else Interner()
    if k == 0:
        a = s_values(g1, 0, mode=EXACT, interner=interner, iters=iters)
        b = s_values(g2, 0, mode=EXACT, interner=interner, iters=iters)
        return int(a[0]) == int(b[0])
    if k == 1:
        keys1 = _anchor_free_labels(g1, interner, iters)
        keys2 = _anchor_free_labels(g2, interner, iters)
    else:
        keys1 = node_aggregates(g1, k - 1, interner, iters)
        keys2 = node_aggregates(g2, k - 1, interner, iters)
    if not _same_multiset(keys1, keys2):
        return False
    buckets: dict[int, tuple[list[int], list[int]]] = {}
    for v, key in enumerate(keys1.tolist()):
        buckets.setdefault(key, ([], []))[0].append(v)
    for v, key in enumerate(keys2.tolist()):
        buckets[key][1].append(v)
    for nodes1, nodes2 in sorted(buckets.values(), key=lambda b: (len(b[0]), b[0])):
        a = node_aggregates(g1, k, interner, iters, nodes1)
        b = node_aggregates(g2, k, interner, iters, nodes2)
        if not _same_multiset(a, b):
            return False
    return True


def t_equivalent(g1: Graph, g2: Graph, k: int, interner: Interner | None = None) -> bool:
    if g1.n != g2.n:
        return False
    interner = interner if interner is not None else Interner()
    return t_values(g1, k, EXACT, interner) == t_values(g2, k, EXACT, interner)


# walk patterns ------------------------------------------------------------------------


def pattern_walk_count(g: Graph, anchors: Sequence[int], pattern: Sequence[int], end: int) -> int:
    """Number of walks ``h_1..h_p`` ending at ``end`` whose seed values
    (anchor index or 0) read ``pattern``."""
    anchors = _check_anchors(g, anchors)
    if not pattern:
        raise LabelError("pattern must be nonempty")
    k = len(anchors)
    if any(not 0 <= int(p) <= k for p in pattern):
        raise LabelError(f"pattern entries must lie in 0..{k}")
    seed = [0] * g.n
    for q, a in enumerate(anchors, start=1):
        seed[a] = q
    counts = [int(seed[x] == pattern[0]) for x in range(g.n)]
    for p in pattern[1:]:
        nxt = [0] * g.n
        for y in range(g.n):
            if seed[y] != p:
                continue
            total = sum(counts[x] for x in g.adj[y])
            if g.loops[y]:
                total += counts[y]
            nxt[y] = total
        counts = nxt
    return counts[end]
