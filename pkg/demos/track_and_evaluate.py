"""Replay planned per-UAV paths with the kinematic follower.

Plans on the bundled benchmark, derives the three UAV paths, flies them
with position noise to mimic GPS error, then plots the altitude
profiles over time and the planned-vs-flown error per waypoint.

    python demos/track_and_evaluate.py [noise_sigma_m]
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt

import swarmpath as sp
from dataclasses import replace

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

sigma = float(sys.argv[1]) if len(sys.argv) > 1 else 0.5
scenario = sp.benchmark_scenario()
report = sp.run(scenario, replace(scenario.pso, seed=3))
uav_paths = sp.derive_paths(report.best_path, scenario.formation)

config = sp.SimConfig(speed=2.0, timestep=0.1, noise_sigma=sigma, seed=42)
traces = sp.simulate(uav_paths, config)
series = [sp.path_error(p, t) for p, t in zip(uav_paths, traces)]

for n, s in enumerate(series, start=1):
    print(f"UAV {n}: max error {s.max_error:.3f} m, "
          f"mean error {s.mean_error:.3f} m (noise sigma {sigma} m)")

fig, (ax1, ax2) = plt.subplots(1, 2, figsize=(12, 4.5))
colors = ["tab:red", "tab:blue", "tab:green"]
for n, trace in enumerate(traces):
    ax1.plot(trace.times, trace.positions[:, 2], color=colors[n], lw=0.8,
             label=f"UAV {n + 1}")
ax1.axhspan(scenario.z_min, scenario.z_max, color="gray", alpha=0.15,
            label="safe band")
ax1.set_xlabel("time (s)")
ax1.set_ylabel("altitude (m)")
ax1.set_title(f"altitude tracking (noise {sigma} m)")
ax1.legend(fontsize=8)

for n, s in enumerate(series):
    ax2.plot(s.errors, color=colors[n], marker="o", ms=3, lw=0.8,
             label=f"UAV {n + 1}")
ax2.set_xlabel("waypoint index")
ax2.set_ylabel("closest-sample error (m)")
ax2.set_title("planned vs flown")
ax2.legend(fontsize=8)

fig.tight_layout()
target = OUT / f"tracking_noise{sigma:g}.png"
fig.savefig(target, dpi=130)
print(f"wrote {target}")
