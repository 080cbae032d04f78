"""Run every KL estimator on one undersampled count pair.

Draws a truth pair (q, t) over 400 categories, samples far fewer
observations than categories, and prints each estimator next to the
exact divergence.  The Bayesian estimators report an uncertainty; the
plugins do not.
"""

import numpy as np

from bayesdiv import (
    build_table,
    estimate_dkl_dp,
    estimate_dkl_dpm,
    estimate_dkl_plugin,
    estimate_dkl_zhang,
    exact_dkl,
    sample_dirichlet,
    sample_multinomial,
)

K = 400
SIZE = 200

rng = np.random.default_rng(20260814)
q = sample_dirichlet(K, 1.0, rng)
t = sample_dirichlet(K, 1.0, rng)
table = build_table(sample_multinomial(q, SIZE, rng), sample_multinomial(t, SIZE, rng), K)

truth = exact_dkl(q, t)
print(f"K = {K} categories, N = M = {SIZE} observations per sample")
print(f"exact divergence of the truth pair: {truth:.4f} nats\n")

dpm = estimate_dkl_dpm(table)
dp = estimate_dkl_dp(table)
print(f"{'estimator':<12} {'estimate':>9}   error")
print(f"{'dpm':<12} {dpm.value:9.4f}   {dpm.value - truth:+.4f}  (posterior std {dpm.posterior_std:.4f})")
print(f"{'dp':<12} {dp.value:9.4f}   {dp.value - truth:+.4f}")
for scheme in ("naive", "jeffreys", "trybula", "perks"):
    value = estimate_dkl_plugin(table, scheme)
    print(f"{scheme:<12} {value:9.4f}   {value - truth:+.4f}")
zhang = estimate_dkl_zhang(table)
print(f"{'zhang':<12} {zhang:9.4f}   {zhang - truth:+.4f}")

print("\nWith N/K = 0.5 the plugins are dominated by missing categories.")
print("The mixture lands closest, and its miss is in line with the")
print("uncertainty it reports.")
