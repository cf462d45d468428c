"""Command-line interface.

Subcommands: ``fingerprint``, ``compare``, ``index build``, ``index query``
and ``verify``. The run configuration is echoed to standard error so that
standard output only carries results and stays byte-identical across runs
and parallelism degrees.

Exit codes: 0 success / equivalent, 1 not equivalent or failing suite,
2 usage, input or store errors.
"""

from __future__ import annotations

import argparse
import json
import re
import sys
from pathlib import Path

from . import slabel as sl
from . import suites
from .estimators import batch_fingerprints
from .formats import FORMATS, FormatError, guess_format, parse_graph
from .graph import GraphError, NamedGraph
from .index import IndexRecord, IndexStore, StoreError, default_store_path
from .walks import w_equivalent

EXIT_OK, EXIT_DIFFERENT, EXIT_ERROR = 0, 1, 2
_METHOD = re.compile(r"^(w|s|t)(\d*)$")


class CliError(Exception):
    pass


def parse_method(method: str, k: int | None) -> tuple[str, int]:
    """``s2`` -> ("s", 2); a bare family takes ``k`` from ``--k``."""
    m = _METHOD.match(method)
    if not m:
        raise CliError(f"unknown method {method!r}; use w, s0..s3 or t0..t2")
    family, digits = m.group(1), m.group(2)
    if family == "w":
        if digits:
            raise CliError("method w takes no k")
        return "w", 0
    if digits and k is not None and int(digits) != k:
        raise CliError(f"method {method} conflicts with --k {k}")
    return family, int(digits) if digits else (2 if k is None else k)


# input ------------------------------------------------------------------------------


def _detect(raw: bytes) -> str:
    # graph6/sparse6 bytes are all >= 58, so a leading integer means edge list
    first = next((l for l in raw.splitlines() if l.strip()), b"")
    return "edgelist" if first.strip().isdigit() else guess_format(first)


def read_graphs(path: str, fmt: str, errors: list[str]) -> list[NamedGraph]:
    """Graphs in ``path`` (``-`` is stdin); parse problems go to ``errors``."""
    raw = sys.stdin.buffer.read() if path == "-" else Path(path).read_bytes()
    fmt = _detect(raw) if fmt == "auto" else fmt
    if fmt == "edgelist":
        if not raw.strip():
            return []
        try:
            return [NamedGraph(parse_graph(raw, fmt), f"{path}:1", f"{path}:1")]
        except (FormatError, GraphError) as exc:
            errors.append(f"{path}:1: {exc}")
            return []
    out = []
    for lineno, line in enumerate(raw.splitlines(), start=1):
        if not line.strip():
            continue
        try:
            out.append(NamedGraph(parse_graph(line.strip(), fmt), f"{path}:{lineno}", f"{path}:{lineno}"))
        except (FormatError, GraphError) as exc:
            errors.append(f"{path}:{lineno}: {exc}")
    return out


def _read_all(paths, fmt, errors) -> list[NamedGraph]:
    graphs = []
    for p in paths:
        try:
            graphs += read_graphs(p, fmt, errors)
        except OSError as exc:
            errors.append(f"{p}: {exc.strerror or exc}")
    return graphs


def _echo_config(args, **extra) -> None:
    fields = {
        "command": " ".join(filter(None, (args.command, getattr(args, "index_command", None)))),
        "method": getattr(args, "method", None),
        "k": getattr(args, "k", None),
        "mode": getattr(args, "mode", None),
        "iters": getattr(args, "iters", None),
        "format": getattr(args, "format", None),
        "jobs": getattr(args, "jobs", None),
        "seed": getattr(args, "seed", None),
        **extra,
    }
    shown = " ".join(f"{k}={v}" for k, v in fields.items() if v is not None)
    print(f"# config {shown}", file=sys.stderr)


def _report_errors(errors: list[str]) -> None:
    for e in errors:
        print(f"error: {e}", file=sys.stderr)


# commands ----------------------------------------------------------------------------


def _fingerprint_method(args) -> tuple[str, int]:
    family, k = parse_method(args.method, args.k)
    if family == "w":
        raise CliError("walk labels are compared pairwise; use compare --method w")
    if family == "t" and args.iters != sl.FULL:
        raise CliError("the t family needs --iters full")
    return family, k


def cmd_fingerprint(args) -> int:
    family, k = _fingerprint_method(args)
    _echo_config(args)
    errors: list[str] = []
    graphs = _read_all(args.inputs, args.format, errors)
    fps = batch_fingerprints([g.graph for g in graphs], k, family, args.mode, args.iters, args.wide, args.jobs)
    for g, fp in zip(graphs, fps):
        print(f"{g.id}\t{fp.to_line()}")
    _report_errors(errors)
    return EXIT_ERROR if errors else EXIT_OK


def _single(path: str, fmt: str) -> NamedGraph:
    errors: list[str] = []
    graphs = read_graphs(path, fmt, errors)
    if errors:
        raise CliError(errors[0])
    if len(graphs) != 1:
        raise CliError(f"{path}: expected exactly one graph, found {len(graphs)}")
    return graphs[0]


def cmd_compare(args) -> int:
    family, k = parse_method(args.method, args.k)
    if family == "t" and args.iters != sl.FULL:
        raise CliError("the t family needs --iters full")
    _echo_config(args)
    try:
        a, b = _single(args.first, args.format), _single(args.second, args.format)
    except OSError as exc:
        raise CliError(str(exc)) from None
    g1, g2 = a.graph, b.graph
    method = "w" if family == "w" else f"{family}{k}"
    if g1.n != g2.n:
        same = False
    elif family == "w":
        same = w_equivalent(g1, g2)
    elif k > g1.n or (family == "t" and k >= g1.n):
        raise CliError(f"method {method} needs more than {g1.n} nodes")
    elif args.mode == sl.EXACT:
        same = sl.s_equivalent(g1, g2, k, args.iters) if family == "s" else sl.t_equivalent(g1, g2, k)
    else:
        f1 = sl.fingerprint(g1, k, family, sl.HASHED, args.iters, wide=True)
        f2 = sl.fingerprint(g2, k, family, sl.HASHED, args.iters, wide=True)
        same = f1.matches(f2)
    verdict = "equivalent" if same else "not-equivalent"
    print(f"{verdict}\t{method}\t{a.id}\t{b.id}")
    return EXIT_OK if same else EXIT_DIFFERENT


def _store(args) -> IndexStore:
    path = args.store or default_store_path()
    if path is None:
        raise CliError("no store given: pass --store or set GRAPHPRINT_STORE")
    return IndexStore(path)


def cmd_index_build(args) -> int:
    family, k = _fingerprint_method(args)
    store = _store(args)
    _echo_config(args, store=store.path)
    errors: list[str] = []
    graphs = _read_all(args.inputs, args.format, errors)
    fps = batch_fingerprints([g.graph for g in graphs], k, family, args.mode, args.iters, args.wide, args.jobs)
    written = store.append(IndexRecord.from_fingerprint(fp, g.id, g.source) for g, fp in zip(graphs, fps))
    print(f"indexed\t{written}\t{store.path}")
    _report_errors(errors)
    return EXIT_ERROR if errors else EXIT_OK


def cmd_index_query(args) -> int:
    family, k = _fingerprint_method(args)
    store = _store(args)
    _echo_config(args, store=store.path)
    records = store.records()
    errors: list[str] = []
    graphs = _read_all(args.inputs, args.format, errors)
    fps = batch_fingerprints([g.graph for g in graphs], k, family, args.mode, args.iters, args.wide, args.jobs)
    for g, fp in zip(graphs, fps):
        hits = [r.graph_id for r in records if r.matches(fp)]
        print(f"{g.id}\t{' '.join(hits)}")
    _report_errors(errors)
    return EXIT_ERROR if errors else EXIT_OK


def cmd_verify(args) -> int:
    names = list(suites.SUITES) if "all" in args.suites else args.suites
    unknown = [n for n in names if n not in suites.SUITES]
    if unknown:
        raise CliError(f"unknown suite(s) {', '.join(unknown)}; choose from {', '.join(suites.SUITES)} or all")
    _echo_config(args)
    params = json.loads(args.params) if args.params else {}
    reports = []
    for name in names:
        report = suites.run_suite(name, params.get(name), seed=args.seed, jobs=args.jobs)
        # wall time goes to stderr so stdout stays byte-identical between runs
        print(report.to_text(timing=False), flush=True)
        print(f"# time {name} {report.wall_time:.2f}s", file=sys.stderr, flush=True)
        reports.append(report)
    summary = {"passed": all(r.passed for r in reports), "suites": [r.summary() for r in reports]}
    if args.summary:
        Path(args.summary).write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")
    return EXIT_OK if summary["passed"] else EXIT_DIFFERENT


# argument parsing -----------------------------------------------------------------------


def _common(p: argparse.ArgumentParser, method: str, mode: str) -> None:
    p.add_argument("--method", default=method, help="w, s0..s3 or t0..t2 (bare s/t uses --k)")
    p.add_argument("--k", type=int, default=None, help="anchor count for a bare s/t method")
    p.add_argument("--mode", choices=sl.MODES, default=mode)
    p.add_argument("--iters", choices=sl.ITER_BUDGETS, default=sl.FULL, help="iteration budget")
    p.add_argument("--format", choices=("auto",) + FORMATS, default="auto")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="graphprint", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("fingerprint", help="print one fingerprint line per input graph")
    p.add_argument("inputs", nargs="+")
    _common(p, "s2", sl.HASHED)
    p.add_argument("--wide", action="store_true", help="also print the SHA-256 digest")
    p.set_defaults(func=cmd_fingerprint)

    p = sub.add_parser("compare", help="decide equivalence of two graphs")
    p.add_argument("first")
    p.add_argument("second")
    _common(p, "s2", sl.EXACT)
    p.set_defaults(func=cmd_compare)

    p = sub.add_parser("index", help="build or query a fingerprint store")
    isub = p.add_subparsers(dest="index_command", required=True)
    for name, func, help_ in (
        ("build", cmd_index_build, "append fingerprints of the inputs to the store"),
        ("query", cmd_index_query, "list stored ids matching each input"),
    ):
        q = isub.add_parser(name, help=help_)
        q.add_argument("inputs", nargs="+")
        _common(q, "s2", sl.HASHED)
        q.add_argument("--store", default=None, help="store path (default: $GRAPHPRINT_STORE)")
        q.add_argument("--no-wide", dest="wide", action="store_false", help="skip SHA-256 digests")
        q.set_defaults(func=func)

    p = sub.add_parser("verify", help="run verification suites")
    p.add_argument("suites", nargs="+", help="suite names or 'all'")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--seed", type=int, default=suites.DEFAULT_SEED)
    p.add_argument("--params", default=None, help="JSON object of per-suite parameter overrides")
    p.add_argument("--summary", default=None, help="write a JSON summary to this path")
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_ERROR if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (CliError, StoreError, sl.LabelError, json.JSONDecodeError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
