"""Small convergence experiment: estimates against sample size.

Reruns every estimator over a ladder of sample sizes and several
repetitions, prints the mean-estimate/mean-truth ratio per size, and
reduces each curve to its N* score (the first size where the ratio
enters the +-5% band and stays there).  Writes the tidy per-row CSV
next to this script.
"""

from pathlib import Path

import numpy as np

from bayesdiv import ExperimentConfig, compute_nstar, run_convergence, write_rows_csv

config = ExperimentConfig(
    generator="dirichlet",
    K=200,
    alpha_true=1.0,
    beta_true=1.0,
    size_ladder=(25, 50, 100, 200, 400, 1000, 4000),
    repetitions=8,
    estimators=("dpm", "dp", "jeffreys", "zhang"),
    divergence="kl",
    master_seed=3,
)

rows = run_convergence(config)
out = Path(__file__).with_name("convergence_ladder.csv")
write_rows_csv(rows, out)
print(f"{len(rows)} rows written to {out.name}\n")

means = {}
for row in rows:
    means.setdefault((row.estimator, row.N), []).append((row.estimate, row.true_value))

print("mean estimate / mean truth:")
print(f"{'N':>6} " + "".join(f"{name:>10}" for name in config.estimators))
for size in config.size_ladder:
    cells = []
    for name in config.estimators:
        pairs = means[(name, size)]
        ratio = np.mean([e for e, _ in pairs]) / np.mean([t for _, t in pairs])
        cells.append(f"{ratio:10.3f}")
    print(f"{size:>6} " + "".join(cells))

print("\nN* (first size inside the +-5% band that stays inside):")
for name, score in sorted(compute_nstar(rows).items()):
    print(f"  {name:<10} {'not reached' if score is None else score}")
