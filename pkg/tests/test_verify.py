import json
from importlib import resources

import jsonschema
import numpy as np
import pytest

from tidalbundle.connection import phase_point
from tidalbundle.scenario import builtin_scenario, builtin_scenarios
from tidalbundle.verify import (DEFAULT_ALPHAS, TOLERANCES, _Bench,
                                alpha_sweep, check_einstein_trace,
                                check_homogeneous_maxwell,
                                check_inhomogeneous_maxwell, check_structural,
                                full_trace_rhs, report_json,
                                report_summary_table, run_suite,
                                sample_phase_points)


def _suite(points=3, seed=5, **kw):
    return run_suite(builtin_scenarios(), points=points, seed=seed, **kw)


def test_default_suite_passes():
    report = _suite()
    assert report["summary"]["fail"] == 0
    assert report["summary"]["pass"] > 0
    assert report["summary"]["max_rel_residual"] < 1e-9


def test_reports_are_deterministic():
    a = report_json(_suite())
    b = report_json(_suite())
    assert a == b
    # different seed samples different points
    c = report_json(_suite(seed=6))
    assert a != c


def test_report_matches_schema():
    report = _suite(points=2)
    schema = json.loads(resources.files("tidalbundle")
                        .joinpath("schemas/report.schema.json").read_text())
    jsonschema.validate(report, schema)
    # and survives a JSON round trip unchanged
    assert json.loads(report_json(report)) == report


def test_negative_control_fails_only_torsion():
    report = run_suite([builtin_scenario("negative_control")],
                       points=4, seed=1)
    failed = {c["check"] for c in report["checks"] if not c["passed"]}
    assert failed == {"strong-torsion"}
    assert report["summary"]["fail"] > 0


def test_summary_table_readable():
    report = _suite(points=2)
    table = report_summary_table(report)
    assert "strong-torsion" in table
    assert table.endswith("\n")
    assert f"{report['summary']['pass']} passed" in table


def test_point_sampler_contract():
    sc = builtin_scenario("reissner_nordstrom")
    rng = np.random.default_rng(2)
    pts = sample_phase_points(sc, 20, rng)
    assert len(pts) == 20
    box = sc.sampling_box
    for p in pts:
        assert sc.metric.guard_ok(p.x)
        for i in range(4):
            assert box[i][0] <= p.x[i] <= box[i][1]
        q = p.causal_sign * p.norm ** 2
        assert -4.0 <= q <= -0.25


def test_check_groups_pass_individually():
    sc = builtin_scenario("reissner_nordstrom")
    rng = np.random.default_rng(0)
    p = sample_phase_points(sc, 1, rng)[0]
    for fn in (check_structural, check_homogeneous_maxwell,
               check_inhomogeneous_maxwell, check_einstein_trace):
        results = fn(sc, p, alpha=1.0)
        assert results, fn.__name__
        for r in results:
            assert r.passed, (fn.__name__, r.check, r.rel_residual)
            assert r.tol == TOLERANCES[r.check]
            d = r.to_dict()
            assert isinstance(d["x"], list)
            assert isinstance(d["passed"], bool)


def test_alpha_zero_skips_full_trace():
    sc = builtin_scenario("reissner_nordstrom")
    rng = np.random.default_rng(0)
    p = sample_phase_points(sc, 1, rng)[0]
    names = {r.check for r in check_einstein_trace(sc, p, alpha=0.0)}
    assert names == {"einstein-trace"}
    names = {r.check for r in check_einstein_trace(sc, p, alpha=1.0)}
    assert names == {"einstein-trace", "einstein-trace-full"}


def test_full_trace_rhs_matter_linearity():
    # synthetic matter enters only through -8 pi (rho_m - eps T/2)
    sc = builtin_scenario("reissner_nordstrom")
    rng = np.random.default_rng(3)
    p = sample_phase_points(sc, 1, rng)[0]
    b = _Bench(sc.metric, sc.potential, 1.0, p)
    base = full_trace_rhs(b)
    shifted = full_trace_rhs(b, rho_m=0.2, matter_trace=0.3)
    want = -8.0 * np.pi * (0.2 - 0.5 * b.eps * 0.3)
    assert shifted - base == pytest.approx(want, rel=1e-12)


def test_custom_alpha_grid_respected():
    report = _suite(points=1, alphas=(0.25,))
    assert report["config"]["alphas"] == [0.25]
    assert {c["alpha"] for c in report["checks"]} == {0.25}
    default = _suite(points=1)
    assert sorted(default["config"]["alphas"]) == sorted(DEFAULT_ALPHAS)


def test_alpha_sweep_rows():
    sc = builtin_scenario("flat_coulomb")
    rows = alpha_sweep(sc, (-1.0, 0.0, 1.0), points=2, seed=4)
    assert len(rows) == 6
    for row in rows:
        assert row["scenario"] == "flat_coulomb"
        assert row["rel_residual_trace_decomposition"] < 1e-9
    # the quadratic term is even in alpha
    by_pt = [r for r in rows if r["point"] == 0]
    plus = next(r for r in by_pt if r["alpha"] == 1.0)
    minus = next(r for r in by_pt if r["alpha"] == -1.0)
    assert plus["contortion_quadratic"] == pytest.approx(
        minus["contortion_quadratic"], rel=1e-12)


def test_zero_points_gives_empty_report():
    report = _suite(points=0)
    assert report["checks"] == []
    assert report["summary"] == {"pass": 0, "fail": 0, "max_rel_residual": 0.0}
