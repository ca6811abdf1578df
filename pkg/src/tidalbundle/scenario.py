"""Scenario files: a metric, a potential, a coupling, and run parameters.

A scenario is the single unit of configuration every command consumes.  The
JSON layout is validated against the shipped schema, then semantically:
catalog names must resolve, the charts of metric and potential must match,
the initial point must pass the chart guard, and the initial fiber must be
non-null after optional normalization.
"""

from __future__ import annotations

import importlib.resources
import json
from dataclasses import dataclass

import jsonschema
import numpy as np

from .dynamics import IntegratorConfig, normalize_velocity
from .errors import NullFiberError, ScenarioError
from .fields import (MetricField, PotentialField, builtin_metric,
                     builtin_potential, coords_compatible)
from .tensors import PhasePoint

# Default base-coordinate sampling boxes per chart.  Spherical boxes keep
# clear of the axis and of every catalog metric's inner guard radius.
_BOX_CARTESIAN = [[0.0, 1.0], [-1.0, 1.0], [-1.0, 1.0], [-1.0, 1.0]]
_BOX_SPHERICAL = [[0.0, 1.0], [4.0, 50.0], [0.7, 2.4], [0.0, 6.2]]

_DEFAULTS = {
    "potential": {"name": "zero", "params": {}},
    "alpha": 0.0,
    "initial": {"x0": [0.0, 0.0, 0.0, 0.0], "y0": [1.0, 0.0, 0.0, 0.0],
                "normalize": "none"},
    "integrator": {"method": "rk45-adaptive", "t_span": [0.0, 10.0],
                   "samples": 201, "step": None, "rtol": 1e-10,
                   "atol": 1e-10, "max_steps": 1_000_000},
    "einstein_consistent": False,
    "nonspray_perturbation": 0.0,
}

BUILTIN_IDS = (
    "flat_vacuum",
    "flat_uniform_b",
    "schwarzschild_vacuum",
    "reissner_nordstrom",
    "flat_coulomb",
    "flat_gauge",
    "cyclotron",
    "schwarzschild_circular",
    "negative_control",
)

# The default verification suite (the catalog four).
DEFAULT_SUITE = ("flat_vacuum", "flat_uniform_b", "schwarzschild_vacuum",
                 "reissner_nordstrom")


@dataclass(frozen=True)
class Scenario:
    id: str
    metric: MetricField
    potential: PotentialField
    alpha: float
    x0: np.ndarray
    y0: np.ndarray                 # after normalization, if requested
    normalize: object              # -1, 1, or "none"
    w0: np.ndarray                 # None when no deviation block
    v0: np.ndarray
    integrator: IntegratorConfig
    sampling_box: np.ndarray       # (4, 2)
    einstein_consistent: bool
    nonspray_perturbation: float
    raw: dict                      # defaults filled in; echo-able

    @property
    def initial_point(self) -> PhasePoint:
        g = self.metric.pack(self.x0).g
        return PhasePoint.create(g, self.x0, self.y0)

    @property
    def has_deviation(self) -> bool:
        return self.w0 is not None


def _schema():
    ref = importlib.resources.files("tidalbundle") / "schemas/scenario.schema.json"
    return json.loads(ref.read_text())


def scenario_defaults() -> dict:
    """The default-filled skeleton, for --echo-defaults."""
    d = {"id": "example", "metric": {"name": "minkowski", "params": {}}}
    return _fill_defaults(d)


def _fill_defaults(data: dict) -> dict:
    out = json.loads(json.dumps(data))   # deep copy, JSON types only
    for key, val in _DEFAULTS.items():
        if key not in out:
            out[key] = json.loads(json.dumps(val))
        elif isinstance(val, dict):
            for k2, v2 in val.items():
                out[key].setdefault(k2, v2)
    out["metric"].setdefault("params", {})
    out["potential"].setdefault("params", {})
    return out


def scenario_from_dict(data: dict, source="<dict>") -> Scenario:
    try:
        jsonschema.validate(data, _schema())
    except jsonschema.ValidationError as e:
        path = "/".join(str(p) for p in e.absolute_path) or "<root>"
        raise ScenarioError(f"{source}: invalid scenario at {path}: {e.message}")

    data = _fill_defaults(data)

    try:
        metric = builtin_metric(data["metric"]["name"], data["metric"]["params"])
    except (ValueError, TypeError) as e:
        raise ScenarioError(f"{source}: metric: {e}")
    try:
        potential = builtin_potential(data["potential"]["name"],
                                      data["potential"]["params"])
    except (ValueError, TypeError) as e:
        raise ScenarioError(f"{source}: potential: {e}")
    if not coords_compatible(metric, potential):
        raise ScenarioError(
            f"{source}: metric chart {metric.coords!r} does not match "
            f"potential chart {potential.coords!r}")

    x0 = np.asarray(data["initial"]["x0"], dtype=float)
    y0 = np.asarray(data["initial"]["y0"], dtype=float)
    if not metric.guard_ok(x0):
        raise ScenarioError(
            f"{source}: initial.x0 {x0.tolist()} is outside the chart of "
            f"metric {metric.name!r}")
    if not potential.guard_ok(x0):
        raise ScenarioError(
            f"{source}: initial.x0 {x0.tolist()} is outside the domain of "
            f"potential {potential.name!r}")

    g = metric.pack(x0).g
    normalize = data["initial"]["normalize"]
    if normalize != "none":
        try:
            y0 = normalize_velocity(g, y0, normalize)
        except NullFiberError as e:
            raise ScenarioError(f"{source}: initial.normalize: {e}")
    try:
        PhasePoint.create(g, x0, y0)
    except NullFiberError as e:
        raise ScenarioError(
            f"{source}: initial fiber vector is null: {e}. Set "
            "initial.normalize to -1 (timelike) or 1 (spacelike), or pick a "
            "y0 off the light cone.")

    w0 = v0 = None
    if "deviation" in data:
        w0 = np.asarray(data["deviation"]["w0"], dtype=float)
        v0 = np.asarray(data["deviation"]["v0"], dtype=float)

    icfg = data["integrator"]
    integrator = IntegratorConfig(
        method=icfg["method"], t_span=tuple(icfg["t_span"]),
        samples=icfg["samples"], step=icfg["step"], rtol=icfg["rtol"],
        atol=icfg["atol"], max_steps=icfg["max_steps"])
    try:
        integrator.validate()
    except ValueError as e:
        raise ScenarioError(f"{source}: integrator: {e}")

    if "sampling" in data and "box" in data["sampling"]:
        box = np.asarray(data["sampling"]["box"], dtype=float)
    else:
        box = np.asarray(_BOX_SPHERICAL if metric.coords == "spherical"
                         else _BOX_CARTESIAN)
        data["sampling"] = {"box": box.tolist()}
    if np.any(box[:, 1] < box[:, 0]):
        raise ScenarioError(f"{source}: sampling.box has hi < lo")

    return Scenario(
        id=data["id"], metric=metric, potential=potential,
        alpha=float(data["alpha"]), x0=x0, y0=y0, normalize=normalize,
        w0=w0, v0=v0, integrator=integrator, sampling_box=box,
        einstein_consistent=bool(data["einstein_consistent"]),
        nonspray_perturbation=float(data["nonspray_perturbation"]),
        raw=data)


def load_scenario(path) -> Scenario:
    try:
        with open(path) as f:
            data = json.load(f)
    except OSError as e:
        raise ScenarioError(f"cannot read scenario file: {e}")
    except json.JSONDecodeError as e:
        raise ScenarioError(f"{path}: not valid JSON: {e}")
    return scenario_from_dict(data, source=str(path))


def builtin_scenario(scenario_id: str) -> Scenario:
    if scenario_id not in BUILTIN_IDS:
        raise ScenarioError(
            f"unknown built-in scenario {scenario_id!r}; "
            f"available: {', '.join(BUILTIN_IDS)}")
    ref = (importlib.resources.files("tidalbundle")
           / f"scenarios/{scenario_id}.json")
    return scenario_from_dict(json.loads(ref.read_text()),
                              source=f"builtin:{scenario_id}")


def builtin_scenarios(ids=DEFAULT_SUITE):
    return [builtin_scenario(i) for i in ids]


def resolve_scenario(ref: str) -> Scenario:
    """Accept either a built-in id or a path to a JSON file."""
    if ref in BUILTIN_IDS:
        return builtin_scenario(ref)
    return load_scenario(ref)
