"""Plan a formation mission end to end and draw the result.

Loads the bundled ten-obstacle benchmark, optimizes the centroid path
with the angle-encoded swarm, derives the three per-UAV paths from the
formation offsets, and renders the scene in 3D next to the convergence
curve. Figures land in demos/output/.

Run from the repository root:

    python demos/plan_and_derive.py [seed]
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import swarmpath as sp
from dataclasses import replace

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

seed = int(sys.argv[1]) if len(sys.argv) > 1 else 1
scenario = sp.benchmark_scenario()
print(f"scenario {sp.scenario_fingerprint(scenario)[:12]}, seed {seed}")

# optimize the centroid path
report = sp.run(scenario, replace(scenario.pso, seed=seed))
best = report.best_cost
print(f"best cost: total={best.total:.2f} (length {best.j1:.2f} m, "
      f"violation {best.j2:.2g}, altitude {best.j3:.2g})")
print(f"converged after {report.convergence_iteration} iterations")

# derive one path per UAV from the rigid formation offsets
uav_paths = sp.derive_paths(report.best_path, scenario.formation)

fig = plt.figure(figsize=(13, 5.5))
ax = fig.add_subplot(121, projection="3d")

# obstacles as cylinder surfaces
for obstacle in scenario.obstacles:
    c = obstacle.base_center
    angle = np.linspace(0, 2 * np.pi, 24)
    z = np.linspace(c.z, obstacle.top_altitude, 6)
    angle, z = np.meshgrid(angle, z)
    ax.plot_surface(c.x + obstacle.radius * np.cos(angle),
                    c.y + obstacle.radius * np.sin(angle),
                    z, color="tan", alpha=0.35, linewidth=0)

colors = ["tab:red", "tab:blue", "tab:green"]
for n, path in enumerate(uav_paths):
    xyz = path.array
    ax.plot(xyz[:, 0], xyz[:, 1], xyz[:, 2], color=colors[n], lw=1.2,
            label=f"UAV {n + 1}")
centroid_xyz = report.best_path.array
ax.plot(centroid_xyz[:, 0], centroid_xyz[:, 1], centroid_xyz[:, 2],
        "k--", lw=1.5, label="centroid")
ax.scatter(*scenario.start.xyz, c="k", marker="o", s=40)
ax.scatter(*scenario.target.xyz, c="k", marker="*", s=80)
ax.set_xlabel("x (m)")
ax.set_ylabel("y (m)")
ax.set_zlabel("z (m)")
ax.set_title(f"formation paths, seed {seed}")
ax.legend(loc="upper left", fontsize=8)

ax2 = fig.add_subplot(122)
totals = [b.total for b in report.trace]
ax2.plot(totals, "b-")
ax2.axvline(report.convergence_iteration, color="gray", ls=":",
            label=f"converged @ {report.convergence_iteration}")
ax2.set_yscale("log")
ax2.set_xlabel("iteration")
ax2.set_ylabel("best cost")
ax2.set_title("convergence")
ax2.legend()

fig.tight_layout()
target = OUT / f"mission_seed{seed}.png"
fig.savefig(target, dpi=130)
print(f"wrote {target}")
