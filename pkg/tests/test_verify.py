import json

import pytest

from src.core.combinatorics import PatternH
from src.verify import (
    conjecture_probe,
    inequality_report,
    monotonicity_check,
    oracle_equivalence_check,
    oracle_grid,
    run_point,
    theorem1_grid,
    theorem1_point,
    theorem2_grid,
    theorem2_point,
    verify_theorem1,
    verify_theorem2,
)


def test_theorem1_petersen_point():
    report = theorem1_point(5, 3, 1)
    assert report.ok, report.flags
    assert (report.formula, report.constructive, report.oracle) == (5, 5, 5)
    assert report.extras["phi_minus_one"] == 5


def test_theorem1_small_grid():
    reports = verify_theorem1([(n, 2, 1) for n in (3, 4, 5)])
    assert [r.constructive for r in reports] == [2, 3, 5]
    assert all(r.ok for r in reports)
    assert verify_theorem1([]) == []


def test_theorem1_r3_grid():
    reports = verify_theorem1(theorem1_grid(3, 8))
    assert len(reports) == 5 + 6 + 3 + 4 + 5
    bad = [(r.n, r.r, r.k, r.flags) for r in reports if not r.ok]
    assert not bad


@pytest.mark.slow
def test_theorem1_acceptance_grid():
    reports = verify_theorem1(theorem1_grid(4, 9))
    assert all(r.ok for r in reports)
    assert all(r.flags["at_most_one_single"] for r in reports)


@pytest.mark.parametrize(
    "n,candidates,extremal",
    [(11, [28, 27, 27], [0]), (12, [33, 33, 32], [0, 1]), (13, [39, 39, 38], [0, 1]), (14, [46, 45, 45], [0])],
)
def test_theorem2_k2(n, candidates, extremal):
    report = theorem2_point(n, 2, 2)
    assert report.ok, report.flags
    assert report.formula == max(candidates)
    assert report.extras["phi_candidates"] == candidates
    assert report.extras["extremal"] == extremal


def test_theorem2_below_threshold_is_skipped():
    report = theorem2_point(10, 2, 2)
    assert report.status == "skipped" and report.extras["n0"] == 11
    assert not report.mismatch


def test_theorem2_degenerate_k1():
    report = theorem2_point(5, 2, 1)
    assert report.ok, report.flags
    assert report.extras["phi_candidates"] == [10, 9]


def test_theorem2_grid():
    assert list(theorem2_grid(2, 2, 13)) == [(11, 2, 2), (12, 2, 2), (13, 2, 2)]
    assert verify_theorem2([]) == []


@pytest.mark.slow
def test_theorem2_k3_at_threshold():
    report = theorem2_point(21, 2, 3)
    assert report.formula == 71
    assert report.extras["phi_candidates"] == [70, 71, 70, 69]
    assert report.ok, report.flags


def test_monotonicity_is_seeded():
    a = monotonicity_check(5, 2, 1, samples=20, seed=7)
    b = monotonicity_check(5, 2, 1, samples=20, seed=7)
    assert a.flags == {"monotone": True}
    assert a.model_dump() == b.model_dump()


def test_oracle_exhaustive_k4():
    report = oracle_equivalence_check(4, 2, PatternH.two_edge(2, 1))
    assert report.ok, report.extras
    assert report.extras["graphs"] == 64


def test_oracle_sampled():
    report = oracle_equivalence_check(6, 3, PatternH.independent(3, 2), samples=15, seed=3)
    assert report.ok, report.extras
    assert report.extras["graphs"] == 15


@pytest.mark.slow
def test_oracle_acceptance_grid():
    for n, r, pattern, samples in oracle_grid(200):
        report = oracle_equivalence_check(n, r, pattern, samples=samples, seed=20180601)
        assert report.ok, (n, r, pattern, report.extras)


@pytest.mark.slow
def test_monotonicity_acceptance_grid():
    for n, r, k in theorem1_grid(4, 9):
        assert monotonicity_check(n, r, k, samples=200, seed=20180601).ok


def test_probe_two_edge_case():
    report = conjecture_probe(6, 2, 2, 1)
    assert (report.formula, report.constructive, report.oracle) == (8, 8, 8)
    assert report.extras["verdict"] == "agree"
    assert report.ok


def test_probe_independent_case():
    report = conjecture_probe(5, 2, 2, 0)
    assert report.flags["matches_independent_edges"]
    assert report.constructive == 5


def test_inequality_reports():
    assert inequality_report("6", kmax=3, rmax=3, span=20).ok
    report = inequality_report("ratio", rmax=3, nmax=30)
    assert report.check == "inequality-ratio" and report.extras["violations"] == 0
    with pytest.raises(ValueError):
        inequality_report("7")


def test_run_point_records_timing():
    report = run_point("theorem1", dict(n=4, r=2, k=0))
    assert report.timings is not None and report.ok
    line = json.loads(report.model_dump_json(exclude={"timings"}))
    assert "timings" not in line
    assert list(line)[:4] == ["check", "n", "r", "k"]
