"""scikit-learn style wrappers: a fingerprint transformer and a lookup index."""

from __future__ import annotations

from collections import defaultdict
from concurrent.futures import ProcessPoolExecutor
from typing import Sequence

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .graph import Graph, GraphError
from .slabel import FAMILIES, ITER_BUDGETS, MODES, Fingerprint, fingerprint


def check_graph(x) -> Graph:
    """Coerce one input to :class:`Graph`.

    Accepts a Graph, any object exposing ``nodes`` and ``edges`` the way
    networkx graphs do (nodes renumbered in iteration order), or a square
    0/1 adjacency matrix.
    """
    if isinstance(x, Graph):
        return x
    if hasattr(x, "nodes") and hasattr(x, "edges"):
        if getattr(x, "is_directed", lambda: False)():
            raise GraphError("directed graphs are not supported")
        index = {v: i for i, v in enumerate(x.nodes)}
        return Graph.from_edges(len(index), [(index[a], index[b]) for a, b in x.edges])
    arr = np.asarray(x)
    if arr.ndim == 2:
        return Graph.from_adjacency(arr)
    raise GraphError(f"cannot interpret {type(x).__name__} as a graph")


def check_graphs(X) -> list[Graph]:
    if isinstance(X, (Graph, np.ndarray)) or hasattr(X, "nodes"):
        raise GraphError("expected a sequence of graphs, got a single graph")
    return [check_graph(x) for x in X]


def _one(args) -> Fingerprint:
    g, k, family, mode, iters, wide = args
    return fingerprint(g, k, family, mode, iters, wide)


def batch_fingerprints(
    graphs: Sequence[Graph],
    k: int,
    family: str = "s",
    mode: str = "hashed",
    iters: str = "full",
    wide: bool = False,
    n_jobs: int = 1,
) -> list[Fingerprint]:
    """Fingerprints in input order; the result does not depend on ``n_jobs``."""
    work = [(g, k, family, mode, iters, wide) for g in graphs]
    if n_jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=n_jobs) as pool:
            return list(pool.map(_one, work, chunksize=max(1, len(work) // (4 * n_jobs))))
    return [_one(w) for w in work]


class GraphFingerprinter(BaseEstimator, TransformerMixin):
    """Map graphs to 64-bit fingerprint digests.

    ``transform`` returns an ``(n_graphs, 1)`` uint64 array;
    :meth:`fingerprints` returns the full :class:`Fingerprint` objects.
    """

    def __init__(self, family="s", k=2, mode="hashed", iters="full", wide=False, n_jobs=1):
        self.family = family
        self.k = k
        self.mode = mode
        self.iters = iters
        self.wide = wide
        self.n_jobs = n_jobs

    def _validate_params(self):
        if self.family not in FAMILIES:
            raise ValueError(f"family must be one of {FAMILIES}")
        if self.mode not in MODES:
            raise ValueError(f"mode must be one of {MODES}")
        if self.iters not in ITER_BUDGETS:
            raise ValueError(f"iters must be one of {ITER_BUDGETS}")
        if self.family == "t" and self.iters != "full":
            raise ValueError("the t family needs the full iteration budget")
        if int(self.k) < 0:
            raise ValueError("k must be non-negative")

    def fit(self, X=None, y=None):
        self._validate_params()
        self.method_ = f"{self.family}{self.k}"
        return self

    def fingerprints(self, X) -> list[Fingerprint]:
        check_is_fitted(self, "method_")
        graphs = check_graphs(X)
        return batch_fingerprints(graphs, int(self.k), self.family, self.mode, self.iters, self.wide, self.n_jobs)

    def transform(self, X) -> np.ndarray:
        fps = self.fingerprints(X)
        return np.array([fp.digest64 for fp in fps], dtype=np.uint64).reshape(-1, 1)


class FingerprintIndex(BaseEstimator):
    """In-memory fingerprint index.

    ``fit(X, y)`` stores graphs under ids ``y`` (default ``0..len(X)-1``);
    ``predict(X)`` returns, per query graph, the list of candidate ids whose
    fingerprints match. Candidates still need an exact isomorphism check.
    """

    def __init__(self, family="s", k=2, mode="hashed", iters="full", wide=True, n_jobs=1):
        self.family = family
        self.k = k
        self.mode = mode
        self.iters = iters
        self.wide = wide
        self.n_jobs = n_jobs

    def _fingerprinter(self) -> GraphFingerprinter:
        return GraphFingerprinter(self.family, self.k, self.mode, self.iters, self.wide, self.n_jobs).fit()

    def fit(self, X, y=None):
        fps = self._fingerprinter().fingerprints(X)
        ids = list(range(len(fps))) if y is None else list(y)
        if len(ids) != len(fps):
            raise ValueError("X and y have different lengths")
        if len(set(ids)) != len(ids):
            raise ValueError("graph ids must be unique")
        table = defaultdict(list)
        for gid, fp in zip(ids, fps):
            table[fp.digest64].append((gid, fp))
        self.table_ = dict(table)
        self.ids_ = ids
        self.fingerprints_ = fps
        return self

    def predict(self, X) -> list[list]:
        check_is_fitted(self, "table_")
        out = []
        for fp in self._fingerprinter().fingerprints(X):
            out.append([gid for gid, stored in self.table_.get(fp.digest64, []) if stored.matches(fp)])
        return out
