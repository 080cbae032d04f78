"""Entropy of an undersampled distribution, with and without a prior.

The mixture entropy estimator averages posterior entropies over the
concentration parameter with evidence weights.  On counts that cover a
fraction of the categories it stays near the truth where the naive
plugin collapses toward the entropy of the observed support.
"""

import math

import numpy as np

from bayesdiv import (
    estimate_entropy_nsb,
    exact_entropy,
    sample_dirichlet,
    sample_multinomial,
)

K = 1000

rng = np.random.default_rng(8)
q = sample_dirichlet(K, 1.0, rng)
truth = exact_entropy(q)
print(f"K = {K}, true entropy {truth:.4f} nats (uniform would be {math.log(K):.4f})\n")

print(f"{'N':>6} {'coverage':>9} {'nsb':>8} {'plugin':>8}")
for size in (100, 300, 1000, 10000):
    counts = sample_multinomial(q, size, rng)
    observed = int(np.count_nonzero(counts))
    report = estimate_entropy_nsb(counts, K)
    freq = counts[counts > 0] / size
    plugin = -float(np.sum(freq * np.log(freq)))
    print(f"{size:>6} {observed:>6}/{K} {report.value:8.4f} {plugin:8.4f}")

print(f"\nEven at N = K / 10 the mixture stays within a few percent of "
      f"{truth:.3f};")
print("the plugin needs N >> K to recover from unseen categories.")
