from __future__ import annotations

import subprocess
import sys

import pytest

from graphprint import fixtures as fx
from graphprint.cli import CliError, main, parse_method
from graphprint.formats import serialize_graph
from graphprint.oracle import make_rng, random_graph, random_relabel


def _write(path, graphs, fmt="graph6"):
    path.write_bytes(b"".join(serialize_graph(g, fmt) + b"\n" for g in graphs))
    return str(path)


def test_parse_method():
    assert parse_method("s2", None) == ("s", 2)
    assert parse_method("t", 1) == ("t", 1)
    assert parse_method("s", None) == ("s", 2)
    assert parse_method("w", None) == ("w", 0)
    for bad, k in (("q1", None), ("w2", None), ("s2", 3)):
        with pytest.raises(CliError):
            parse_method(bad, k)


def test_fingerprint_output(tmp_path, capsys):
    path = _write(tmp_path / "g.g6", [fx.cycle(5), fx.path(5)])
    assert main(["fingerprint", path, "--method", "s1"]) == 0
    out, err = capsys.readouterr()
    lines = out.splitlines()
    assert lines[0].startswith(f"{path}:1\ts 1 full hashed 1 ")
    assert lines[1].startswith(f"{path}:2\t")
    assert err.startswith("# config command=fingerprint method=s1")


def test_fingerprint_wide_and_exact(tmp_path, capsys):
    path = _write(tmp_path / "g.g6", [fx.cycle(5)])
    main(["fingerprint", path, "--wide"])
    assert len(capsys.readouterr().out.split("\t")[1].split()) == 7
    main(["fingerprint", path, "--mode", "exact"])
    assert " exact 1 " in capsys.readouterr().out


def test_fingerprint_reports_bad_lines(tmp_path, capsys):
    path = tmp_path / "g.g6"
    path.write_bytes(b"A_\nD?\nB?\n")
    assert main(["fingerprint", str(path), "--method", "s1"]) == 2
    out, err = capsys.readouterr()
    assert len(out.splitlines()) == 2
    assert f"{path}:2:" in err


def test_empty_input_gives_empty_output(tmp_path, capsys):
    path = tmp_path / "empty.g6"
    path.write_bytes(b"")
    assert main(["fingerprint", str(path)]) == 0
    assert capsys.readouterr().out == ""


def test_usage_errors(tmp_path, capsys):
    path = _write(tmp_path / "g.g6", [fx.cycle(5)])
    assert main(["fingerprint", path, "--method", "w"]) == 2
    assert main(["fingerprint", path, "--method", "t1", "--iters", "stable"]) == 2
    assert main(["fingerprint", str(tmp_path / "missing.g6")]) == 2
    assert main(["bogus"]) == 2
    assert main(["verify", "nope"]) == 2
    capsys.readouterr()


@pytest.mark.parametrize("method", ["s1", "s2", "t1", "w"])
def test_compare_verdicts(tmp_path, capsys, method):
    a = _write(tmp_path / "a.g6", [fx.cycle(6)])
    b = _write(tmp_path / "b.g6", [random_relabel(fx.cycle(6), make_rng(1))])
    c = _write(tmp_path / "c.g6", [fx.path(6)])
    assert main(["compare", a, b, "--method", method]) == 0
    assert capsys.readouterr().out == f"equivalent\t{method}\t{a}:1\t{b}:1\n"
    assert main(["compare", a, c, "--method", method]) == 1
    assert capsys.readouterr().out.startswith("not-equivalent\t")


def test_compare_hashed_mode_and_sizes(tmp_path, capsys):
    a = _write(tmp_path / "a.g6", [fx.shrikhande()])
    b = _write(tmp_path / "b.g6", [fx.rook(4)])
    assert main(["compare", a, b, "--method", "s1", "--mode", "hashed"]) == 0
    assert main(["compare", a, b, "--method", "s2", "--mode", "hashed"]) == 1
    small = _write(tmp_path / "s.g6", [fx.path(2)])
    assert main(["compare", small, small, "--method", "s3"]) == 2
    two = _write(tmp_path / "two.g6", [fx.path(2), fx.path(3)])
    assert main(["compare", two, small]) == 2
    capsys.readouterr()


def test_compare_edgelist_and_sparse6_with_loops(tmp_path, capsys):
    a = _write(tmp_path / "a.txt", [fx.path(4, loop_at_end=True)], "edgelist")
    b = _write(tmp_path / "b.s6", [fx.path(4)], "sparse6")
    assert main(["compare", a, b, "--method", "w"]) == 1
    assert main(["compare", a, a, "--method", "w"]) == 0
    capsys.readouterr()


def test_index_build_and_query(tmp_path, capsys, monkeypatch):
    store = tmp_path / "db.tsv"
    cat = _write(tmp_path / "cat.g6", [fx.cycle(6), fx.path(6), fx.star(5)])
    q = _write(tmp_path / "q.g6", [random_relabel(fx.path(6), make_rng(3)), fx.complete(6)])
    assert main(["index", "build", cat, "--store", str(store)]) == 0
    assert capsys.readouterr().out == f"indexed\t3\t{store}\n"
    monkeypatch.setenv("GRAPHPRINT_STORE", str(store))
    assert main(["index", "query", q]) == 0
    out, err = capsys.readouterr()
    assert out == f"{q}:1\t{cat}:2\n{q}:2\t\n"
    assert "command=index query" in err
    assert main(["index", "query", q, "--method", "s1"]) == 0
    assert capsys.readouterr().out == f"{q}:1\t\n{q}:2\t\n"


def test_index_errors(tmp_path, capsys, monkeypatch):
    monkeypatch.delenv("GRAPHPRINT_STORE", raising=False)
    q = _write(tmp_path / "q.g6", [fx.cycle(4)])
    assert main(["index", "query", q]) == 2
    bad = tmp_path / "bad.tsv"
    bad.write_text("#graphprint-index\tv0\thash=1\n")
    assert main(["index", "query", q, "--store", str(bad)]) == 2
    assert "version mismatch" in capsys.readouterr().err


def test_verify_command(tmp_path, capsys):
    summary = tmp_path / "sum.json"
    code = main(["verify", "figure1", "trees", "--params", '{"trees": {"pairs": 20}}', "--summary", str(summary)])
    assert code == 0
    out = capsys.readouterr().out
    assert "suite figure1: PASS" in out and "suite trees: PASS cases=20" in out
    assert '"passed": true' in summary.read_text()


def _run(args, stdin=None):
    return subprocess.run(
        [sys.executable, "-m", "graphprint.cli", *args], input=stdin, capture_output=True, check=False
    )


def test_output_byte_identical_across_runs_and_jobs(tmp_path):
    rng = make_rng(4)
    graphs = [random_graph(rng.randint(3, 9), 0.4, rng) for _ in range(40)]
    path = _write(tmp_path / "many.g6", graphs)
    runs = [_run(["fingerprint", path, "--jobs", str(j), "--wide"]) for j in (1, 1, 4)]
    assert all(r.returncode == 0 for r in runs)
    assert runs[0].stdout == runs[1].stdout == runs[2].stdout
    assert len(runs[0].stdout.splitlines()) == 40


def test_stdin_input():
    r = _run(["fingerprint", "-", "--method", "s1"], stdin=b"A_\nB?\n")
    assert r.returncode == 0
    assert r.stdout.decode().splitlines()[0].startswith("-:1\ts 1 ")
