"""Release gates for the whole package.

Ten checks, one test per gate, each with pinned seeds, pinned
tolerances, and a runtime budget.  Every test prints a single summary
line (visible with ``pytest -s`` or in captured output) so a run reads
as a checklist.  These are end-to-end: they exercise the public API the
way the demos and the CLI do, not internals.
"""

import math
import time

import numpy as np

from _oracles import lgram_enumeration, posterior_mc, random_count_pair, zhang_series
from bayesdiv import synth
from bayesdiv.benchmark import ExperimentConfig, compute_nstar, run_convergence
from bayesdiv.cli import main
from bayesdiv.counts import build_table
from bayesdiv.estimators import estimate_dkl_zhang
from bayesdiv.hyperprior import log_weight_kl
from bayesdiv.posterior import (
    HyperParams,
    posterior_dkl,
    posterior_dkl_squared,
    posterior_hellinger_sq,
    prior_mean_crossentropy,
    prior_mean_entropy,
)
from bayesdiv.specfun import delta_psi

FULL_LADDER = (25, 50, 100, 200, 400, 1000, 4000, 10000, 40000)


def _report(num, message):
    print(f"criterion {num:2d}: PASS - {message}")


def test_criterion_01_zhang_closed_form_equals_series():
    rng = np.random.default_rng(1001)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(100):
        n, m, K = random_count_pair(rng, max_k=10, max_count=15)
        closed = estimate_dkl_zhang(build_table(n, m, K))
        worst = max(worst, abs(closed - zhang_series(n, m)))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-10
    assert elapsed < 1.0
    _report(1, f"closed form vs series, 100 instances, worst |diff|={worst:.2e} "
               f"(tol 1e-10), {elapsed:.2f}s")


def test_criterion_02_dp_limit_recovers_zhang():
    rng = np.random.default_rng(1002)
    start = time.perf_counter()
    worst = 0.0
    for _ in range(50):
        # full first-sample support: the additive-constant identity is
        # exact when every category has n_i >= 1
        n, m, K = random_count_pair(rng, max_k=10, max_count=15, min_n=1)
        table = build_table(n, m, K)
        posterior = posterior_dkl(table, HyperParams(1e-8, 1.0, K))
        shift = float(delta_psi(table.M + K, table.M + 1)) + (K - 1) / table.N
        worst = max(worst, abs(posterior - shift - estimate_dkl_zhang(table)))
    elapsed = time.perf_counter() - start
    assert worst <= 1e-6
    assert elapsed < 1.0
    _report(2, f"posterior at alpha->0, beta=1 minus constant vs zhang, 50 instances, "
               f"worst |diff|={worst:.2e} (tol 1e-6), {elapsed:.2f}s")


def test_criterion_03_posterior_moments_match_monte_carlo():
    rng = np.random.default_rng(1003)
    start = time.perf_counter()
    worst_sigma = 0.0
    for i in range(20):
        n, m, K = random_count_pair(rng, max_k=8)
        alpha = float(10 ** rng.uniform(-1, 1))
        beta = float(10 ** rng.uniform(-1, 1))
        table = build_table(n, m, K)
        hp = HyperParams(alpha, beta, K)
        mc = posterior_mc(n, m, K, alpha, beta, draws=100_000, seed=5000 + i)
        for key, value in (
            ("dkl", posterior_dkl(table, hp)),
            ("dkl2", posterior_dkl_squared(table, hp)),
            ("hellinger_sq", posterior_hellinger_sq(table, hp)),
        ):
            worst_sigma = max(worst_sigma, abs(value - mc[key]) / mc[key + "_se"])
    elapsed = time.perf_counter() - start
    assert worst_sigma < 3.0
    assert elapsed < 30.0
    _report(3, f"dkl, dkl^2, hellinger^2 vs 1e5-draw Monte Carlo, 20 instances, "
               f"worst deviation {worst_sigma:.2f} standard errors (limit 3), {elapsed:.1f}s")


def test_criterion_04_prior_means_bracket_log_k():
    start = time.perf_counter()
    values = np.logspace(-4, 4, 100)
    for K in (400, 8000):
        log_k = math.log(K)
        a = np.array([float(prior_mean_entropy(x, K)) for x in values])
        b = np.array([float(prior_mean_crossentropy(x, K)) for x in values])
        assert np.all(a < log_k)
        assert np.all(b > log_k)
    elapsed = time.perf_counter() - start
    assert elapsed < 1.0
    _report(4, f"A(alpha) < ln K < B(beta) at 100 log-spaced points in [1e-4, 1e4], "
               f"K in {{400, 8000}}, {elapsed:.2f}s")


def test_criterion_05_hyperprior_spreads_log_divergence_evenly():
    start = time.perf_counter()
    K = 400
    u = np.linspace(math.log(1e-4), math.log(1e4), 400)
    scales = np.exp(u)
    a = np.array([float(prior_mean_entropy(x, K)) for x in scales])
    b = np.array([float(prior_mean_crossentropy(x, K)) for x in scales])
    log_w = log_weight_kl(scales[:, None], scales[None, :], K)
    # density on the (ln alpha, ln beta) grid includes the jacobian
    weight = np.exp(log_w - log_w.max() + u[:, None] + u[None, :]).ravel()
    log_z = np.log(b[None, :] - a[:, None]).ravel()
    order = np.argsort(log_z)
    log_z, weight = log_z[order], weight[order]
    cum = np.cumsum(weight) / weight.sum()
    lo = log_z[np.searchsorted(cum, 0.10)]
    hi = log_z[np.searchsorted(cum, 0.90)]
    keep = (log_z >= lo) & (log_z <= hi)
    hist, edges = np.histogram(log_z[keep], bins=24, weights=weight[keep])
    density = hist / np.diff(edges)
    density /= density.mean()
    elapsed = time.perf_counter() - start
    assert density.max() <= 1.25
    assert density.min() >= 0.75
    assert elapsed < 10.0
    _report(5, f"ln(divergence) density over central 80%: max/mean={density.max():.3f}, "
               f"min/mean={density.min():.3f} (band 0.75..1.25), {elapsed:.2f}s")


def test_criterion_06_dirichlet_kl_convergence_ladder():
    start = time.perf_counter()
    config = ExperimentConfig(
        generator="dirichlet",
        K=400,
        alpha_true=1.0,
        beta_true=1.0,
        size_ladder=FULL_LADDER,
        repetitions=10,
        estimators=("dpm", "dp", "naive", "jeffreys", "trybula", "perks", "zhang"),
        divergence="kl",
        master_seed=20260814,
    )
    rows = run_convergence(config)
    nstar = compute_nstar(rows)
    elapsed = time.perf_counter() - start

    def score(name):
        value = nstar[name]
        return math.inf if value is None else value

    rivals = ("naive", "jeffreys", "trybula", "perks", "zhang")
    assert nstar["dpm"] is not None
    assert all(score("dpm") <= score(name) for name in rivals)
    dp_rows = [r for r in rows if r.estimator == "dp" and r.N == 40000]
    ratio = np.mean([r.estimate for r in dp_rows]) / np.mean([r.true_value for r in dp_rows])
    assert abs(ratio - 1.0) <= 0.05
    assert elapsed < 600.0
    rival_best = min(score(name) for name in rivals)
    _report(6, f"KL K=400 ladder: dpm N*={nstar['dpm']} <= best rival N*={rival_best}; "
               f"dp ratio at 40000 = {ratio:.3f} (band +-5%), {elapsed:.0f}s")


def test_criterion_07_markov_bigrams_recovered():
    start = time.perf_counter()
    config = ExperimentConfig(
        generator="markov",
        states=20,
        gram_length=2,
        size_ladder=(400, 1000, 4000, 10000, 40000),
        repetitions=10,
        estimators=("dpm",),
        divergence="kl",
        master_seed=7,
    )
    rows = run_convergence(config)
    top = [r for r in rows if r.N == 40000]
    normalized_mean = float(np.mean([r.estimate / r.true_value for r in top]))
    assert abs(normalized_mean - 1.0) <= 0.05

    # closed-form chain entropies against explicit enumeration
    rng = np.random.default_rng(44)
    spec_q = synth.build_markov_spec(4, 2, rng)
    spec_t = synth.build_markov_spec(4, 2, rng)
    pq = lgram_enumeration(spec_q)
    pt = lgram_enumeration(spec_t)
    entropy = -float(np.sum(pq * np.log(pq)))
    crossentropy = -float(np.sum(pq * np.log(pt)))
    gap_h = abs(synth.markov_entropy(spec_q) - entropy)
    gap_c = abs(synth.markov_crossentropy(spec_q, spec_t) - crossentropy)
    elapsed = time.perf_counter() - start
    assert gap_h <= 1e-12
    assert gap_c <= 1e-12
    assert elapsed < 600.0
    _report(7, f"bigram chain S=20: dpm normalized mean at 40000 = {normalized_mean:.4f} "
               f"(band +-5%); enumeration gaps {gap_h:.1e}/{gap_c:.1e} (tol 1e-12), {elapsed:.0f}s")


def test_criterion_08_dirichlet_hellinger_convergence_ladder():
    start = time.perf_counter()
    config = ExperimentConfig(
        generator="dirichlet",
        K=400,
        alpha_true=1.0,
        beta_true=1.0,
        size_ladder=FULL_LADDER,
        repetitions=10,
        estimators=("dpm", "naive", "jeffreys", "trybula", "perks"),
        divergence="hellinger2",
        master_seed=20260814,
    )
    nstar = compute_nstar(run_convergence(config))
    elapsed = time.perf_counter() - start

    def score(name):
        value = nstar[name]
        return math.inf if value is None else value

    rivals = ("naive", "jeffreys", "trybula", "perks")
    assert nstar["dpm"] is not None
    assert all(score("dpm") <= score(name) for name in rivals)
    rival_best = min(score(name) for name in rivals)
    _report(8, f"squared Hellinger K=400 ladder: dpm N*={nstar['dpm']} <= best rival "
               f"N*={rival_best}, {elapsed:.0f}s")


def test_criterion_09_posterior_std_tracks_repetition_spread():
    start = time.perf_counter()
    config = ExperimentConfig(
        generator="markov",
        states=20,
        gram_length=2,
        size_ladder=(4000,),
        repetitions=30,
        estimators=("dpm",),
        divergence="kl",
        master_seed=9,
    )
    rows = run_convergence(config)
    estimates = np.array([r.estimate for r in rows])
    stds = np.array([r.posterior_std for r in rows])
    spread = float(estimates.std(ddof=1))
    mean_std = float(stds.mean())
    ratio = mean_std / spread
    elapsed = time.perf_counter() - start
    assert 0.5 <= ratio <= 2.0
    assert elapsed < 600.0
    _report(9, f"mean posterior_std={mean_std:.4f} vs spread of 30 repetitions={spread:.4f}, "
               f"ratio {ratio:.2f} (allowed 0.5..2.0), {elapsed:.0f}s")


def test_criterion_10_convergence_csv_byte_identical(tmp_path):
    flags = [
        "--k", "50", "--ladder", "30,60", "--reps", "3",
        "--estimator", "dpm,naive,zhang", "--seed", "99",
    ]
    paths = [tmp_path / name for name in ("a.csv", "b.csv", "c.csv")]
    assert main(["convergence", *flags, "--out", str(paths[0])]) == 0
    assert main(["convergence", *flags, "--out", str(paths[1])]) == 0
    assert main(["convergence", *flags, "--workers", "3", "--out", str(paths[2])]) == 0
    blobs = [p.read_bytes() for p in paths]
    assert blobs[0] == blobs[1] == blobs[2]
    _report(10, f"convergence CSV byte-identical across reruns and worker counts "
                f"({len(blobs[0])} bytes)")
