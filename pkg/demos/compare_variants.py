"""Benchmark classic PSO against the angle-encoded variant.

Runs both variants on matched seeds over the bundled benchmark, prints
the min/max/median summary table, and plots the median best-cost trace
per variant so the convergence behavior can be compared by eye.

    python demos/compare_variants.py [runs_per_variant]
"""

import sys
from pathlib import Path

import matplotlib

matplotlib.use("Agg")
import matplotlib.pyplot as plt
import numpy as np

import swarmpath as sp

OUT = Path(__file__).parent / "output"
OUT.mkdir(exist_ok=True)

runs = int(sys.argv[1]) if len(sys.argv) > 1 else 10
scenario = sp.benchmark_scenario()
result = sp.compare(scenario, runs_per_variant=runs, base_seed=1)

print(f"{'variant':10s} {'runs':>4s} {'min':>10s} {'max':>10s} "
      f"{'median':>10s} {'median iters':>13s}")
for s in result.summaries:
    print(f"{s.variant:10s} {s.runs:4d} {s.min_cost:10.2f} {s.max_cost:10.2f} "
          f"{s.median_cost:10.2f} {s.median_convergence_iteration:13.1f}")

fig, ax = plt.subplots(figsize=(7, 4.5))
for variant, color in (("classic", "tab:orange"), ("theta", "tab:blue")):
    traces = np.array([[b.total for b in r.trace]
                       for r in result.reports[variant]])
    median = np.median(traces, axis=0)
    lo, hi = np.percentile(traces, [25, 75], axis=0)
    ax.plot(median, color=color, label=f"{variant} (median of {runs})")
    ax.fill_between(np.arange(median.size), lo, hi, color=color, alpha=0.2)
ax.set_yscale("log")
ax.set_xlabel("iteration")
ax.set_ylabel("best cost")
ax.set_title("convergence: classic vs angle-encoded swarm")
ax.legend()
fig.tight_layout()
target = OUT / "variant_comparison.png"
fig.savefig(target, dpi=130)
print(f"wrote {target}")
