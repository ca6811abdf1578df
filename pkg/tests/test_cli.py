import json
import subprocess
import sys
import xml.etree.ElementTree as ET

import numpy as np
import pytest

from tidalbundle.cli import main

INFALL = {
    "id": "infall",
    "metric": {"name": "schwarzschild", "params": {"M": 1.0}},
    "initial": {"x0": [0.0, 6.0, 1.5707963267948966, 0.0],
                "y0": [1.0, -0.3, 0.0, 0.0], "normalize": -1},
    "integrator": {"t_span": [0.0, 40.0], "samples": 81},
}


def test_list_text_and_json(capsys):
    assert main(["list"]) == 0
    out = capsys.readouterr().out
    assert "schwarzschild" in out and "cyclotron" in out
    assert main(["list", "--format", "json"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert "coulomb" in data["potentials"]
    assert "negative_control" in data["scenarios"]


def test_compute_json_payload(tmp_path):
    out = tmp_path / "c.json"
    assert main(["compute", "--scenario", "reissner_nordstrom",
                 "--out", str(out)]) == 0
    data = json.loads(out.read_text())
    E = np.array(data["curvature"]["tidal"])
    assert E.shape == (4, 4)
    assert data["curvature"]["tidal_trace"] == pytest.approx(np.trace(E))
    block = np.array(data["curvature"]["curvature_block"])
    y = np.array(data["point"]["y"])
    np.testing.assert_allclose(np.einsum("jikl,j,l->ik", block, y, y), E,
                               rtol=1e-10, atol=1e-15)


def test_compute_at_override(capsys):
    assert main(["compute", "--scenario", "flat_vacuum", "--at",
                 "0", "0", "0", "0", "1", "0.5", "0", "0"]) == 0
    data = json.loads(capsys.readouterr().out)
    assert data["point"]["x"] == [0, 0, 0, 0]
    assert data["point"]["y"] == [1, 0.5, 0, 0]
    # outside the chart: input error
    assert main(["compute", "--scenario", "schwarzschild_vacuum", "--at",
                 "0", "1.5", "1.2", "0", "1", "0", "0", "0"]) == 2
    assert "chart" in capsys.readouterr().err


def test_simulate_deterministic_csv_and_svg(tmp_path):
    a, b = tmp_path / "a.csv", tmp_path / "b.csv"
    assert main(["simulate", "--scenario", "cyclotron", "--out", str(a),
                 "--plot"]) == 0
    assert main(["simulate", "--scenario", "cyclotron", "--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()
    svg = tmp_path / "a.svg"
    root = ET.fromstring(svg.read_text())
    assert root.tag.endswith("svg")


def test_deviate_outputs_rate_columns(tmp_path, capsys):
    out = tmp_path / "d.csv"
    assert main(["deviate", "--scenario", "cyclotron", "--out", str(out)]) == 0
    header = out.read_text().splitlines()[0]
    assert header.endswith("w0,w1,w2,w3,v0,v1,v2,v3")
    assert main(["deviate", "--scenario", "flat_vacuum"]) == 2
    assert "deviation" in capsys.readouterr().err


def test_verify_exit_codes(tmp_path, capsys):
    rep = tmp_path / "r.json"
    assert main(["verify", "--scenario", "flat_vacuum", "--points", "2",
                 "--out", str(rep)]) == 0
    out = capsys.readouterr().out
    assert "passed" in out and str(rep) in out
    report = json.loads(rep.read_text())
    assert report["summary"]["fail"] == 0
    bad = tmp_path / "neg.json"
    assert main(["verify", "--scenario", "negative_control", "--points", "2",
                 "--out", str(bad)]) == 1
    assert main(["verify", "--scenario", "flat_vacuum", "--points", "0",
                 "--out", str(rep)]) == 0


def test_verify_reports_byte_identical(tmp_path):
    a, b = tmp_path / "a.json", tmp_path / "b.json"
    args = ["verify", "--scenario", "flat_uniform_b", "--points", "3",
            "--seed", "9"]
    assert main(args + ["--out", str(a)]) == 0
    assert main(args + ["--out", str(b)]) == 0
    assert a.read_bytes() == b.read_bytes()


def test_sweep_formats(tmp_path):
    csv_path = tmp_path / "s.csv"
    assert main(["sweep", "--scenario", "flat_coulomb", "--points", "1",
                 "--alphas", "0,0.5", "--out", str(csv_path)]) == 0
    lines = csv_path.read_text().splitlines()
    assert lines[0].startswith("scenario,point,alpha")
    assert len(lines) == 3
    json_path = tmp_path / "s.json"
    assert main(["sweep", "--scenario", "flat_coulomb", "--points", "1",
                 "--alphas", "0,0.5", "--format", "json",
                 "--out", str(json_path)]) == 0
    rows = json.loads(json_path.read_text())
    assert rows[0]["alpha"] == 0.0
    # csv cells are repr floats: parse one back exactly
    cell = lines[1].split(",")[11]
    assert float(cell) == rows[0]["tidal_trace"]


def test_truncated_simulation_exit_code(tmp_path):
    case = tmp_path / "infall.json"
    case.write_text(json.dumps(INFALL))
    out = tmp_path / "i.csv"
    assert main(["simulate", "--scenario", str(case), "--out", str(out)]) == 3
    assert "# truncated" in out.read_text()


def test_echo_defaults(capsys):
    assert main(["compute", "--echo-defaults"]) == 0
    base = json.loads(capsys.readouterr().out)
    assert base["metric"]["name"] == "minkowski"
    assert main(["verify", "--scenario", "cyclotron", "--echo-defaults"]) == 0
    full = json.loads(capsys.readouterr().out)
    assert full["integrator"]["rtol"] == 1e-12


def test_bad_inputs_exit_two(tmp_path, capsys):
    assert main(["simulate", "--scenario", "nosuch_scenario"]) == 2
    assert main(["simulate"]) == 2
    assert main(["simulate", "--scenario", "a", "--scenario", "b"]) == 2
    bad = tmp_path / "bad.json"
    bad.write_text('{"id": "x"}')  # metric is required
    assert main(["compute", "--scenario", str(bad)]) == 2
    capsys.readouterr()


def test_console_script_entry_point(tmp_path):
    # the installed `tidal` executable, end to end
    proc = subprocess.run(
        [sys.executable, "-m", "tidalbundle", "verify", "--scenario",
         "flat_vacuum", "--points", "1", "--out", str(tmp_path / "r.json")],
        capture_output=True, text=True)
    assert proc.returncode == 0, proc.stderr
    assert "passed" in proc.stdout
