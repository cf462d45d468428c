from __future__ import annotations

import numpy as np
import pytest

from graphprint import hashing
from graphprint import slabel as sl
from graphprint import suites
from graphprint import walks as wl

SMALL = {
    "trees": {"pairs": 60},
    "complement": {"pairs": 40},
    "separator": {"pairs": 30},
    "connectivity": {"pairs": 30},
    "spectra": {"pairs": 40},
    "hierarchy": {"pairs": 40},
    "monotonicity": {"pairs": 40},
    "exact-hash-agreement": {"comparisons": 200},
    "truncation": {"pairs": 30},
    "identification": {"n_max": 5, "full_anchor_n_max": 4},
    "rank-bound": {"graphs": 40},
    "stabilization": {"comparisons": 60},
}


@pytest.mark.parametrize("name", [n for n in suites.SUITES if n != "glue"])
def test_suite_passes_at_reduced_scale(name):
    report = suites.run_suite(name, SMALL.get(name))
    assert report.passed, report.to_text()
    assert report.cases > 0


def test_glue_degree_check_only():
    cases = suites._glue_cases({}, None)
    assert suites.replay("glue", cases[0]) is None


def _strip_time(summary: dict) -> dict:
    return {k: v for k, v in summary.items() if k != "wall_time"}


def test_results_independent_of_jobs():
    a = suites.run_suite("hierarchy", {"pairs": 30}, jobs=1)
    b = suites.run_suite("hierarchy", {"pairs": 30}, jobs=2)
    assert _strip_time(a.summary()) == _strip_time(b.summary())


def test_seed_changes_cases():
    a = suites.SUITES["trees"][1]({"pairs": 5, "n_max": 10}, suites.make_rng(1))
    b = suites.SUITES["trees"][1]({"pairs": 5, "n_max": 10}, suites.make_rng(2))
    assert a != b


def test_unknown_suite():
    with pytest.raises(suites.UnknownSuite):
        suites.run_suite("no-such-suite")


def test_pack_round_trip():
    from graphprint import fixtures as fx

    g = fx.path(5, loop_at_end=True)
    assert suites.unpack(suites.pack(g)) == g


def test_broken_equivalence_is_caught(monkeypatch):
    monkeypatch.setattr(sl, "s_equivalent", lambda *a, **k: True)
    assert not suites.run_suite("trees", {"pairs": 40}).passed
    assert not suites.run_suite("planar3").passed


def test_broken_hash_is_caught(monkeypatch):
    real = hashing.fold_rows

    def lossy(tag, rows):
        # drops all but the first column: distinct multisets collide
        return real(tag, np.asarray(rows)[:, :1])

    monkeypatch.setattr(hashing, "fold_rows", lossy)
    report = suites.run_suite("exact-hash-agreement", {"comparisons": 200})
    assert not report.passed


def test_broken_walk_labels_are_caught(monkeypatch):
    monkeypatch.setattr(wl, "w_equivalent", lambda g1, g2: g1.n == g2.n and g1.m == g2.m)
    assert not suites.run_suite("spectra", {"pairs": 40}).passed


def test_report_text_lists_failures():
    report = suites.SuiteReport("x", 2, [{"case_index": 1, "detail": {"a": 1}, "case": {}}], 0.5, 3, {})
    text = report.to_text()
    assert text.startswith("suite x: FAIL cases=2 failures=1")
    assert "failure" in text.splitlines()[1]
