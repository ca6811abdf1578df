import json

import numpy as np
import pytest

from tidalbundle.errors import ScenarioError
from tidalbundle.scenario import (BUILTIN_IDS, DEFAULT_SUITE, builtin_scenario,
                                  builtin_scenarios, load_scenario,
                                  resolve_scenario, scenario_defaults,
                                  scenario_from_dict)


def _minimal(**extra):
    data = {"id": "t", "metric": {"name": "minkowski"}}
    data.update(extra)
    return data


def test_builtin_ids_all_load():
    for sid in BUILTIN_IDS:
        sc = builtin_scenario(sid)
        assert sc.id == sid
        assert sc.metric.guard_ok(sc.x0)
    assert set(DEFAULT_SUITE) <= set(BUILTIN_IDS)
    assert len(builtin_scenarios()) == len(DEFAULT_SUITE)


def test_defaults_fill_in():
    sc = scenario_from_dict(_minimal())
    assert sc.potential.name == "zero"
    assert sc.alpha == 0.0
    assert sc.integrator.method == "rk45-adaptive"
    assert not sc.has_deviation
    np.testing.assert_array_equal(sc.y0, [1.0, 0.0, 0.0, 0.0])
    # cartesian chart gets the cartesian sampling box
    assert sc.sampling_box[1][0] == -1.0


def test_defaults_template_is_valid():
    sc = scenario_from_dict(scenario_defaults())
    assert sc.id == "example"


def test_unknown_key_rejected():
    with pytest.raises(ScenarioError, match="extra_knob"):
        scenario_from_dict(_minimal(extra_knob=1))


def test_unknown_metric_name():
    with pytest.raises(ScenarioError, match="unknown metric"):
        scenario_from_dict({"id": "t", "metric": {"name": "kerr"}})


def test_chart_mismatch_between_metric_and_potential():
    data = _minimal(potential={"name": "coulomb", "params": {"Q": 1.0}})
    with pytest.raises(ScenarioError, match="chart"):
        scenario_from_dict(data)


def test_initial_point_outside_chart():
    data = {"id": "t", "metric": {"name": "schwarzschild", "params": {"M": 1.0}},
            "initial": {"x0": [0.0, 1.0, 1.5, 0.0]}}
    with pytest.raises(ScenarioError, match="chart"):
        scenario_from_dict(data)


def test_null_initial_velocity_hint():
    data = _minimal(initial={"x0": [0, 0, 0, 0], "y0": [1.0, 1.0, 0.0, 0.0]})
    with pytest.raises(ScenarioError, match="normalize"):
        scenario_from_dict(data)


def test_normalize_wrong_causal_sign():
    data = _minimal(initial={"y0": [0.1, 1.0, 0.0, 0.0], "normalize": -1})
    with pytest.raises(ScenarioError, match="timelike|spacelike"):
        scenario_from_dict(data)


def test_normalize_applies():
    data = _minimal(initial={"y0": [2.0, 0.5, 0.0, 0.0], "normalize": -1})
    sc = scenario_from_dict(data)
    g = np.diag([-1.0, 1, 1, 1])
    assert g @ sc.y0 @ sc.y0 == pytest.approx(-1.0)


def test_inverted_sampling_box_rejected():
    data = _minimal(sampling={"box": [[0, 1], [1, -1], [0, 1], [0, 1]]})
    with pytest.raises(ScenarioError, match="box"):
        scenario_from_dict(data)


def test_bad_integrator_rejected():
    data = _minimal(integrator={"method": "rk4-fixed", "step": -0.5})
    with pytest.raises(ScenarioError):
        scenario_from_dict(data)


def test_deviation_requires_both_vectors():
    with pytest.raises(ScenarioError, match="v0"):
        scenario_from_dict(_minimal(deviation={"w0": [0, 1, 0, 0]}))
    sc = scenario_from_dict(_minimal(deviation={"w0": [0, 1, 0, 0],
                                                "v0": [0, 0, 0, 0]}))
    assert sc.has_deviation
    np.testing.assert_array_equal(sc.w0, [0, 1, 0, 0])


def test_load_from_file_and_resolve(tmp_path):
    path = tmp_path / "case.json"
    path.write_text(json.dumps(_minimal(alpha=0.25)))
    sc = load_scenario(path)
    assert sc.alpha == 0.25
    assert resolve_scenario(str(path)).alpha == 0.25
    assert resolve_scenario("flat_vacuum").id == "flat_vacuum"
    with pytest.raises(ScenarioError):
        resolve_scenario(str(tmp_path / "missing.json"))
    bad = tmp_path / "bad.json"
    bad.write_text("{not json")
    with pytest.raises(ScenarioError):
        load_scenario(bad)


def test_raw_preserves_filled_document():
    sc = scenario_from_dict(_minimal())
    assert sc.raw["potential"]["name"] == "zero"
    assert sc.raw["integrator"]["samples"] == 201
