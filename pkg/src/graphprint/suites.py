"""Verification suites: each one checks a single structural property on fixtures and
seeded random cases against independent ground truth."""

from __future__ import annotations

import itertools
import json
import time
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Callable

from . import fixtures as fx
from . import slabel as sl
from . import walks as wl
from .graph import (
    Graph,
    complement,
    diameter,
    disjoint_union,
    find_separators,
    is_connected,
    is_k_connected,
    srg_parameters,
)
from .oracle import (
    brute_force_isomorphic,
    enumerate_graphs,
    make_rng,
    random_graph,
    random_pair,
    random_relabel,
    random_tree,
    tree_canonical,
)

DEFAULT_SEED = 20240611


class UnknownSuite(KeyError):
    pass


@dataclass
class SuiteReport:
    name: str
    cases: int
    failures: list[dict]
    wall_time: float
    seed: int
    params: dict
    notes: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.failures

    def summary(self) -> dict:
        return {
            "name": self.name,
            "passed": self.passed,
            "cases": self.cases,
            "failures": len(self.failures),
            "wall_time": round(self.wall_time, 3),
            "seed": self.seed,
            "params": self.params,
        }

    def to_text(self, timing: bool = True) -> str:
        verdict = "PASS" if self.passed else "FAIL"
        time_part = f"time={self.wall_time:.2f}s " if timing else ""
        lines = [
            f"suite {self.name}: {verdict} cases={self.cases} failures={len(self.failures)} "
            f"{time_part}seed={self.seed} params={json.dumps(self.params, sort_keys=True)}"
        ]
        lines += [f"  failure {json.dumps(f, sort_keys=True)}" for f in self.failures]
        lines += [f"  note {n}" for n in self.notes]
        return "\n".join(lines)


# replayable graph encoding ------------------------------------------------------


def pack(g: Graph) -> list:
    return [g.n, [list(e) for e in g.edges()], [i for i in range(g.n) if g.loops[i]]]


def unpack(data) -> Graph:
    n, edges, loops = data
    return Graph.from_edges(n, [tuple(e) for e in edges] + [(i, i) for i in loops])


def _pair_case(rng, n_max, n_min=2, **extra) -> dict:
    g1, g2 = random_pair(rng, n_max, n_min)
    return {"g1": pack(g1), "g2": pack(g2), **extra}


# suites ---------------------------------------------------------------------------
# Each suite is (default params, case builder, checker). The checker returns a
# failure detail dict, or None; a returned "note" key is logged, not failed.


def _trees_cases(p, rng):
    cases = []
    for _ in range(p["pairs"]):
        n = rng.randint(2, p["n_max"])
        t1 = random_tree(n, rng)
        t2 = random_relabel(t1, rng) if rng.random() < 0.3 else random_tree(n, rng)
        cases.append({"g1": pack(t1), "g2": pack(t2)})
    return cases


def _trees_check(c, p):
    t1, t2 = unpack(c["g1"]), unpack(c["g2"])
    canon = tree_canonical(t1) == tree_canonical(t2)
    s1 = sl.s_equivalent(t1, t2, 1)
    if s1 != canon:
        return {"s1": s1, "canonical": canon}
    if t1.n <= p["brute_force_n"] and bool(brute_force_isomorphic(t1, t2)) != canon:
        return {"brute_force_disagrees": True, "canonical": canon}
    return None


def _srg_cases(p, rng):
    g = fx.appendix_srg()[0]
    return [
        {"a": "shrikhande", "b": "rook4"},
        {"g1": pack(g), "g2": pack(random_relabel(g, rng))},
    ]


def _srg_check(c, p):
    if "a" in c:
        cat = fx.fixtures()
        g1, g2 = cat[c["a"]], cat[c["b"]]
    else:
        g1, g2 = unpack(c["g1"]), unpack(c["g2"])
    if g1.n != g2.n or srg_parameters(g1) != srg_parameters(g2):
        return {"error": "pair does not share SRG parameters"}
    interner = sl.Interner()
    labels = {sl.tuple_label(g, [i], sl.EXACT, interner) for g in (g1, g2) for i in range(g.n)}
    if len(labels) != 1:
        return {"distinct_anchor_labels": len(labels)}
    if not sl.s_equivalent(g1, g2, 1, interner=interner):
        return {"s1_equivalent": False}
    return None


def _complement_cases(p, rng):
    return [_pair_case(rng, p["n_max"], 2, k=rng.choice(p["ks"])) for _ in range(p["pairs"])]


def _complement_check(c, p):
    g1, g2, k = unpack(c["g1"]), unpack(c["g2"]), c["k"]
    k = min(k, g1.n)
    a = sl.s_equivalent(g1, g2, k)
    b = sl.s_equivalent(complement(g1), complement(g2), k)
    return None if a == b else {"original": a, "complemented": b}


def _separator_members(g: Graph, size: int) -> set[int]:
    found = set()
    for sep in find_separators(g, size):
        found |= sep
    return found


def _separator_cases(p, rng):
    return [_pair_case(rng, p["n_max"], 4, k=rng.choice(p["ks"])) for _ in range(p["pairs"])]


def _separator_check(c, p):
    g1, g2, k = unpack(c["g1"]), unpack(c["g2"]), c["k"]
    interner = sl.Interner()
    a1 = sl.node_aggregates(g1, k, interner)
    a2 = sl.node_aggregates(g2, k, interner)
    m1, m2 = _separator_members(g1, k - 1), _separator_members(g2, k - 1)
    for i in range(g1.n):
        for j in range(g2.n):
            if a1[i] == a2[j] and ((i in m1) != (j in m2)):
                return {"i": i, "j": j, "i_in_separator": i in m1, "j_in_separator": j in m2}
    return None


def _connectivity_cases(p, rng):
    cases = []
    cat = fx.fixtures()
    names = [n for n, g in cat.items() if g.n <= p["catalog_n_max"] and not g.has_loops]
    for a, b in itertools.combinations(names, 2):
        if cat[a].n == cat[b].n:
            for k in p["ks"]:
                cases.append({"g1": pack(cat[a]), "g2": pack(cat[b]), "k": k, "names": [a, b]})
    cases += [_pair_case(rng, p["n_max"], 4, k=rng.choice(p["ks"])) for _ in range(p["pairs"])]
    return cases


def _connectivity_check(c, p):
    g1, g2, k = unpack(c["g1"]), unpack(c["g2"]), c["k"]
    if k > g1.n or is_k_connected(g1, k) == is_k_connected(g2, k):
        return None
    if sl.s_equivalent(g1, g2, k):
        return {"k_connected": [is_k_connected(g1, k), is_k_connected(g2, k)], "s_equivalent": True}
    return None


def _spectra_cases(p, rng):
    cases = [
        {"g1": pack(fx.cycle(6)), "g2": pack(disjoint_union(fx.complete(3), fx.complete(3))), "expect_w": False},
        {
            "g1": pack(fx.star(4)),
            "g2": pack(disjoint_union(fx.cycle(4), Graph.from_edges(1, []))),
            "expect_w": False,
            "expect_cospectral": True,
        },
    ]
    cases += [_pair_case(rng, p["n_max"], 2) for _ in range(p["pairs"])]
    return cases


def _spectra_check(c, p):
    g1, g2 = unpack(c["g1"]), unpack(c["g2"])
    co = wl.cospectral(g1, g2)
    w = wl.w_equivalent(g1, g2)
    if "expect_cospectral" in c and co != c["expect_cospectral"]:
        return {"cospectral": co}
    if "expect_w" in c and w != c["expect_w"]:
        return {"w_equivalent": w}
    if not co and w:
        return {"cospectral": co, "w_equivalent": w}
    if w != wl.w_equivalent_reference(g1, g2):
        return {"w_equivalent": w, "reference": not w}
    # equal walk labels force equal closed-walk counts
    labels1 = [wl.canonical_w_label(g1, i) for i in range(g1.n)]
    labels2 = [wl.canonical_w_label(g2, j) for j in range(g2.n)]
    for i, j in itertools.product(range(g1.n), range(g2.n)):
        if labels1[i] == labels2[j]:
            c1 = [col[i] for col in wl.walk_matrix(g1, i).columns]
            c2 = [col[j] for col in wl.walk_matrix(g2, j).columns]
            if c1 != c2:
                return {"closed_walks": [i, j]}
    return None


def _hierarchy_cases(p, rng):
    return [_pair_case(rng, p["n_max"], 3, k=rng.choice(p["ks"])) for _ in range(p["pairs"])]


def _hierarchy_check(c, p):
    g1, g2, k = unpack(c["g1"]), unpack(c["g2"]), c["k"]
    interner = sl.Interner()
    s_k = sl.s_equivalent(g1, g2, k, interner=interner)
    s_k1 = sl.s_equivalent(g1, g2, k + 1, interner=interner)
    t_k = sl.t_equivalent(g1, g2, k, interner)
    t_k1 = sl.t_equivalent(g1, g2, k + 1, interner) if k + 1 < g1.n else None
    if s_k1 and not t_k:
        return {"s_k+1": s_k1, "t_k": t_k}
    if t_k1 and not s_k:
        return {"t_k+1": t_k1, "s_k": s_k}
    return None


def _monotonicity_cases(p, rng):
    return [_pair_case(rng, p["n_max"], 3, k=rng.choice(p["ks"])) for _ in range(p["pairs"])]


def _partitions_nested(columns) -> bool:
    for a, b in zip(columns, columns[1:]):
        if len(set(zip(a.tolist(), b.tolist()))) != len(set(b.tolist())):
            return False
    return True


def _monotonicity_check(c, p):
    g1, g2, k = unpack(c["g1"]), unpack(c["g2"]), c["k"]
    k = min(k, g1.n - 1)
    interner = sl.Interner()
    if not sl.s_equivalent(g1, g2, k, interner=interner) and sl.s_equivalent(g1, g2, k + 1, interner=interner):
        return {"s_k": False, "s_k+1": True}
    anchors = list(range(k))
    for g in (g1, g2):
        if not _partitions_nested(sl.refine(g, anchors, interner=interner)):
            return {"refinement_not_nested": anchors}
    return None


def _planar_cases(p, rng):
    names = sorted(fx.polyhedra())
    cases = [{"face": n} for n in names]
    cases += [{"pair": [a, b]} for a, b in itertools.combinations(names, 2)]
    cases += [{"pair": [a, a], "relabel_seed": rng.getrandbits(32)} for a in names]
    return cases


def _planar_check(c, p):
    poly = fx.polyhedra()
    if "face" in c:
        g, triple = poly[c["face"]]
        for order in itertools.permutations(triple):
            final = sl.refine(g, order)[-1]
            if len(set(final.tolist())) != g.n:
                return {"face_order": list(order), "distinct": len(set(final.tolist()))}
        return None
    a, b = c["pair"]
    g1, g2 = poly[a][0], poly[b][0]
    if "relabel_seed" in c:
        g2 = random_relabel(g2, make_rng(c["relabel_seed"]))
    iso = bool(brute_force_isomorphic(g1, g2))
    s3 = sl.s_equivalent(g1, g2, 3) if g1.n >= 3 and g1.n == g2.n else False
    return None if s3 == iso else {"s3": s3, "isomorphic": iso}


def _glue_cases(p, rng):
    return [{"check": "degrees"}, {"check": "s", "k": 2, "expect": True}, {"check": "s", "k": 3, "expect": False}]


def _glue_check(c, p):
    g, u, v = fx.appendix_srg()
    g1, g2 = fx.glued_pair()
    if c["check"] == "degrees":
        for h in (g1, g2):
            deg = h.degrees()
            if h.n != 68 or deg[u] != 35 or deg[v] != 35 or sorted(deg)[:66] != [18] * 66:
                return {"degrees": sorted(set(deg))}
        return None
    got = sl.s_equivalent(g1, g2, c["k"], iters=p["iters"])
    return None if got == c["expect"] else {"k": c["k"], "s_equivalent": got}


def _figure1_cases(p, rng):
    return [{}]


def _figure1_check(c, p):
    g, (a, b) = fx.figure1()
    w_same = wl.same_w_label(wl.canonical_w_label(g, a), wl.canonical_w_label(g, b))
    interner = sl.Interner()
    s_same = sl.tuple_label(g, [a], sl.EXACT, interner) == sl.tuple_label(g, [b], sl.EXACT, interner)
    return None if (w_same and not s_same) else {"w_equal": w_same, "s1_equal": s_same}


def _remark_cases(p, rng):
    return [{}]


def _remark_check(c, p):
    g, u, v = fx.appendix_srg()
    agg = sl.node_aggregates(g, 2, sl.Interner())
    nu = sorted(agg[list(g.adj[u])].tolist())
    nv = sorted(agg[list(g.adj[v])].tolist())
    return None if nu != nv else {"neighbour_multisets_equal": True}


def _agreement_cases(p, rng):
    cases = []
    for _ in range(p["comparisons"]):
        family = rng.choice(("s", "t"))
        case = _pair_case(rng, p["n_max"], 3, family=family, k=rng.choice((0, 1, 2) if family == "s" else (0, 1)))
        cases.append(case)
    return cases


def _agreement_check(c, p):
    g1, g2 = unpack(c["g1"]), unpack(c["g2"])
    fam, k = c["family"], c["k"]
    if fam == "s":
        exact = sl.s_equivalent(g1, g2, k)
    else:
        exact = sl.t_equivalent(g1, g2, k)
    h1 = sl.fingerprint(g1, k, fam, sl.HASHED)
    h2 = sl.fingerprint(g2, k, fam, sl.HASHED)
    hashed = h1.digest64 == h2.digest64
    if exact == hashed:
        return None
    if exact and not hashed:
        return {"exact": exact, "hashed": hashed}
    w1 = sl.fingerprint(g1, k, fam, sl.HASHED, wide=True).wide
    w2 = sl.fingerprint(g2, k, fam, sl.HASHED, wide=True).wide
    if w1 != w2:
        return {"note": f"64-bit collision resolved by wide digest ({fam}{k})"}
    return {"exact": exact, "hashed": hashed, "wide_equal": True}


def _extended_columns(g: Graph, i: int, cols: int) -> list[tuple[int, ...]]:
    col = [0] * g.n
    col[i] = 1
    out = [tuple(col)]
    nbrs = [list(g.adj[j]) + ([j] if g.loops[j] else []) for j in range(g.n)]
    for _ in range(cols - 1):
        col = [sum(col[k] for k in nb) for nb in nbrs]
        out.append(tuple(col))
    return sorted(zip(*out))


def _truncation_cases(p, rng):
    cases = [{"path": n} for n in range(3, 9)]
    cases += [_pair_case(rng, p["n_max"], 2) for _ in range(p["pairs"])]
    return cases


def _truncation_check(c, p):
    if "path" in c:
        n = c["path"]
        a, b = fx.path(n), fx.path(n, loop_at_end=True)
        short = wl.walk_matrix(a, 0, n).rows, wl.walk_matrix(b, 0, n).rows
        full = wl.canonical_w_label(a, 0), wl.canonical_w_label(b, 0)
        if sorted(short[0]) != sorted(short[1]) or full[0] == full[1]:
            return {"n_columns_equal": sorted(short[0]) == sorted(short[1]), "n_plus_1_equal": full[0] == full[1]}
        return None
    g1, g2 = unpack(c["g1"]), unpack(c["g2"])
    rank = wl.w_equivalent_reference(g1, g2, wl.RANK_BASED)
    full = wl.w_equivalent_reference(g1, g2, wl.N_PLUS_1)
    if rank != full:
        return {"rank_based": rank, "n_plus_1": full}
    n = g1.n
    for i, j in itertools.product(range(n), range(n)):
        short = _extended_columns(g1, i, n + 1) == _extended_columns(g2, j, n + 1)
        long = _extended_columns(g1, i, n + 5) == _extended_columns(g2, j, n + 5)
        if short != long:
            return {"node_pair": [i, j], "n_plus_1": short, "n_plus_5": long}
    return None


def _identification_cases(p, rng):
    cases = [{"classes": n, "relabel_seed": rng.getrandbits(32)} for n in range(1, p["n_max"] + 1)]
    cases += [{"full_anchor": n} for n in range(1, p["full_anchor_n_max"] + 1)]
    return cases


def _identification_check(c, p):
    if "classes" in c:
        n = c["classes"]
        k = min(2, n)
        graphs = enumerate_graphs(n)
        rng = make_rng(c["relabel_seed"])
        interner = sl.Interner()
        ids = [int(sl.s_values(g, k, interner=interner)[0]) for g in graphs]
        if len(set(ids)) != len(ids):
            return {"n": n, "classes": len(ids), "distinct_ids": len(set(ids))}
        for g, gid in zip(graphs, ids):
            again = int(sl.s_values(random_relabel(g, rng), k, interner=interner)[0])
            if again != gid:
                return {"n": n, "relabel_changed": pack(g)}
        return None
    n = c["full_anchor"]
    graphs = enumerate_graphs(n)
    for g, h in itertools.combinations_with_replacement(graphs, 2):
        same = g is h
        if sl.s_equivalent(g, h, n) != same:
            return {"n": n, "g1": pack(g), "g2": pack(h), "isomorphic": same}
    return None


def _rank_cases(p, rng):
    cases = []
    while len(cases) < p["graphs"]:
        g = random_graph(rng.randint(2, p["n_max"]), rng.choice((0.2, 0.5, 0.8)), rng)
        if is_connected(g):
            cases.append({"g": pack(g)})
    return cases


def _rank_check(c, p):
    g = unpack(c["g"])
    ranks = [wl.node_rank(g, i) for i in range(g.n)]
    if max(ranks) < diameter(g) + 1:
        return {"max_rank": max(ranks), "diameter": diameter(g)}
    for i in range(g.n):
        rows = [list(r) for r in wl.walk_matrix(g, i).rows]
        if wl.bareiss_rank(rows) != ranks[i]:
            return {"node": i, "incremental": ranks[i], "bareiss": wl.bareiss_rank(rows)}
    return None


def _stabilization_cases(p, rng):
    return [_pair_case(rng, p["n_max"], 3, k=rng.choice(p["ks"])) for _ in range(p["comparisons"])]


def _stabilization_check(c, p):
    g1, g2, k = unpack(c["g1"]), unpack(c["g2"]), c["k"]
    full = sl.s_equivalent(g1, g2, k, sl.FULL)
    stable = sl.s_equivalent(g1, g2, k, sl.STABLE)
    return None if full == stable else {"full": full, "stable": stable}


SUITES: dict[str, tuple[dict, Callable, Callable]] = {
    "trees": ({"pairs": 1000, "n_max": 16, "brute_force_n": 10}, _trees_cases, _trees_check),
    "srg-s1": ({}, _srg_cases, _srg_check),
    "complement": ({"pairs": 500, "n_max": 8, "ks": [1, 2]}, _complement_cases, _complement_check),
    "separator": ({"pairs": 200, "n_max": 8, "ks": [2, 3]}, _separator_cases, _separator_check),
    "connectivity": (
        {"pairs": 200, "n_max": 8, "ks": [2, 3], "catalog_n_max": 20},
        _connectivity_cases,
        _connectivity_check,
    ),
    "spectra": ({"pairs": 500, "n_max": 10}, _spectra_cases, _spectra_check),
    "hierarchy": ({"pairs": 500, "n_max": 8, "ks": [0, 1]}, _hierarchy_cases, _hierarchy_check),
    "monotonicity": ({"pairs": 500, "n_max": 8, "ks": [0, 1, 2]}, _monotonicity_cases, _monotonicity_check),
    "planar3": ({}, _planar_cases, _planar_check),
    "glue": ({"iters": sl.STABLE}, _glue_cases, _glue_check),
    "figure1": ({}, _figure1_cases, _figure1_check),
    "remark-neighbors": ({}, _remark_cases, _remark_check),
    "exact-hash-agreement": ({"comparisons": 10000, "n_max": 7}, _agreement_cases, _agreement_check),
    "truncation": ({"pairs": 500, "n_max": 8}, _truncation_cases, _truncation_check),
    "identification": ({"n_max": 7, "full_anchor_n_max": 5}, _identification_cases, _identification_check),
    "rank-bound": ({"graphs": 500, "n_max": 12}, _rank_cases, _rank_check),
    "stabilization": ({"comparisons": 1000, "n_max": 8, "ks": [0, 1, 2]}, _stabilization_cases, _stabilization_check),
}


def _run_case(args):
    name, case, params = args
    return SUITES[name][2](case, params)


def run_suite(name: str, params: dict | None = None, seed: int = DEFAULT_SEED, jobs: int = 1) -> SuiteReport:
    """Run one suite; results are independent of ``jobs``."""
    if name not in SUITES:
        raise UnknownSuite(f"unknown suite {name!r}; choose from {sorted(SUITES)}")
    defaults, build, _ = SUITES[name]
    merged = {**defaults, **(params or {})}
    start = time.perf_counter()
    cases = build(merged, make_rng(seed))
    work = [(name, c, merged) for c in cases]
    if jobs > 1 and len(work) > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = list(pool.map(_run_case, work, chunksize=max(1, len(work) // (4 * jobs))))
    else:
        results = [_run_case(w) for w in work]
    failures, notes = [], []
    for index, (case, res) in enumerate(zip(cases, results)):
        if res is None:
            continue
        if set(res) == {"note"}:
            notes.append(f"case {index}: {res['note']}")
            continue
        failures.append({"case_index": index, "detail": res, "case": case})
    return SuiteReport(name, len(cases), failures, time.perf_counter() - start, seed, merged, notes)


def replay(name: str, case: dict, params: dict | None = None):
    """Re-run a single recorded case in isolation."""
    defaults = SUITES[name][0]
    return SUITES[name][2](case, {**defaults, **(params or {})})
