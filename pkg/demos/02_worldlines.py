"""Charged worldlines: cyclotron closed form, circular orbit, infall.

Integrates three autoparallels of the deformed connection and compares
against what each case should do: a textbook cyclotron circle, a
Schwarzschild circular geodesic, and a radial infall that exits the
chart (truncating cleanly).  Writes SVG plots next to this script.
"""

from pathlib import Path

import numpy as np

from tidalbundle import (IntegratorConfig, builtin_metric, builtin_potential,
                         integrate_worldline, phase_point)
from tidalbundle.dynamics import normalize_velocity
from tidalbundle.svg import line_plot

OUT = Path(__file__).parent / "out"
OUT.mkdir(exist_ok=True)

# --- cyclotron --------------------------------------------------------
cart = builtin_metric("minkowski")
ub = builtin_potential("uniform_b", {"B": 2.0, "axis": "z"})
alpha = 0.7
omega = alpha * 2.0                      # angular rate at unit norm
y0 = normalize_velocity(np.diag([-1.0, 1, 1, 1]), [1.0, 0.3, 0, 0], -1.0)
p = phase_point(cart, np.zeros(4), y0)
period = 2 * np.pi / omega
cfg = IntegratorConfig(t_span=(0.0, 2 * period), samples=401,
                       rtol=1e-12, atol=1e-12)
traj = integrate_worldline(cart, ub, alpha, p, cfg)
radius = y0[1] / omega
print(f"cyclotron: omega = {omega}, closed-form radius = {radius:.6f}")
dist = np.hypot(traj.x[:, 1], traj.x[:, 2] + radius)
print(f"  radius error along two turns: {np.max(np.abs(dist - radius)):.2e}")
Path(OUT / "cyclotron.svg").write_text(line_plot(
    [(traj.x[:, 1], traj.x[:, 2], "orbit")],
    title="cyclotron orbit", xlabel="x", ylabel="y"))

# --- circular orbit ---------------------------------------------------
sw = builtin_metric("schwarzschild", {"M": 1.0})
zero = builtin_potential("zero")
r = 10.0
Omega = r ** -1.5                        # Kepler rate, M = 1
x0 = np.array([0.0, r, np.pi / 2, 0.0])
p = phase_point(sw, x0, np.array([1.0, 0.0, 0.0, Omega]))
cfg = IntegratorConfig(t_span=(0.0, 2 * np.pi / Omega), samples=201,
                       rtol=1e-12, atol=1e-12)
orbit = integrate_worldline(sw, zero, 0.0, p, cfg)
print(f"\ncircular orbit at r = {r}: drift over one period "
      f"{np.max(np.abs(orbit.x[:, 1] - r)):.2e}")
Path(OUT / "orbit.svg").write_text(line_plot(
    [(orbit.x[:, 1] * np.cos(orbit.x[:, 3]),
      orbit.x[:, 1] * np.sin(orbit.x[:, 3]), "r = 10")],
    title="circular geodesic", xlabel="x", ylabel="y"))

# --- infall and chart truncation --------------------------------------
x0 = np.array([0.0, 6.0, np.pi / 2, 0.0])
yin = normalize_velocity(sw.pack(x0).g, [1.0, -0.3, 0.0, 0.0], -1.0)
p = phase_point(sw, x0, yin)
cfg = IntegratorConfig(t_span=(0.0, 40.0), samples=161)
fall = integrate_worldline(sw, zero, 0.0, p, cfg)
print(f"\nradial infall: truncated = {fall.truncated} near "
      f"t = {fall.exit_time:.4f}, last sampled r = {fall.x[-1, 1]:.4f}")
print(f"  fiber norm drift along the whole run: {fall.norm_drift:.2e}")
Path(OUT / "infall.svg").write_text(line_plot(
    [(fall.t, fall.x[:, 1], "r(t)")],
    title="infall toward the horizon", xlabel="parameter", ylabel="r"))

print(f"\nplots written to {OUT}/")
