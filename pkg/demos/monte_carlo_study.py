"""Full finite-snapshot study: 500 trials of 64 snapshots each.

Every trial draws fresh data, estimates the loaded sample covariance, solves
both beamformers on it, and scores them against the exact model covariances.
The whole run is a pure function of the scenario seed.

Run with: python3 demos/monte_carlo_study.py
"""

import time

from wbbeam import monte_carlo_compare, reference_scenario

scn = reference_scenario()
print(
    f"scenario: {scn.geometry.num_sensors} sensors, {scn.num_snapshots} snapshots/trial, "
    f"{scn.num_trials} trials, seed {scn.rng_seed}"
)

start = time.perf_counter()
report = monte_carlo_compare(scn)
elapsed = time.perf_counter() - start
print(f"completed in {elapsed:.2f} s\n")

width = max(len(name) for name in report.metric_names())
header = f"{'metric':<{width}}  " + "".join(f"{m:>22s}" for m in report.per_method)
print(header)
print("-" * len(header))
for name in report.metric_names():
    row = f"{name:<{width}}  "
    for method in report.per_method:
        stat = report.per_method[method][name]
        row += f"{stat.mean:>12.4f} ±{stat.std:>7.4f} "
    print(row)

single = report.per_method["mvdr"]
multi = report.per_method["mvmfdr"]
print(
    f"\nWith only 64 snapshots the single-frequency design wanders "
    f"({single['soi_ripple_db'].mean:.2f} dB mean ripple) while the "
    f"multi-frequency constraints hold exactly "
    f"({multi['soi_ripple_db'].mean:.2e} dB), and its output ratio is "
    f"{multi['sinr_db'].mean - single['sinr_db'].mean:+.2f} dB better on average."
)
