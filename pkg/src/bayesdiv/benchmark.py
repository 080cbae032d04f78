"""Convergence benchmark harness.

Draws synthetic sample pairs of increasing size from a known truth
(Dirichlet vectors or Markov-chain L-gram distributions), runs a set of
estimators on every (size, repetition) cell, and writes tidy CSV.  The
N* statistic scores convergence: the smallest ladder size at which an
estimator's mean enters a +-5% relative band around the truth and stays
inside it for every larger size.

Everything is deterministic for a fixed master seed: repetitions get
independent child seeds, rows are sorted before writing, and worker
pools only change where the work runs, not its result.
"""

import csv
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, replace
from typing import NamedTuple

import numpy as np

from . import estimators as est
from . import synth
from .counts import build_table

__all__ = [
    "ESTIMATOR_NAMES",
    "ExperimentConfig",
    "Row",
    "run_convergence",
    "write_rows_csv",
    "read_rows_csv",
    "compute_nstar",
    "run_nstar",
    "write_nstar_csv",
]

ESTIMATOR_NAMES = ("dpm", "dp", "naive", "jeffreys", "trybula", "perks", "zhang")
DEFAULT_LADDER = (25, 50, 100, 200, 400, 1000, 4000, 10000, 40000)


class Row(NamedTuple):
    estimator: str
    N: int
    rep: int
    estimate: float
    true_value: float
    posterior_std: float | None


@dataclass(frozen=True)
class ExperimentConfig:
    """Benchmark run description; validated on construction."""

    generator: str = "dirichlet"
    K: int = 400
    states: int = 20
    gram_length: int = 2
    alpha_true: float = 1.0
    beta_true: float = 1.0
    size_ladder: tuple = DEFAULT_LADDER
    repetitions: int = 10
    estimators: tuple = ESTIMATOR_NAMES
    divergence: str = "kl"
    master_seed: int = 0
    nested_subsample: bool = False
    parent_size: int | None = None
    workers: int = 1

    def __post_init__(self):
        object.__setattr__(self, "size_ladder", tuple(int(n) for n in self.size_ladder))
        object.__setattr__(self, "estimators", tuple(self.estimators))
        if self.generator not in ("dirichlet", "markov"):
            raise ValueError(f"unknown generator {self.generator!r}")
        if self.divergence not in ("kl", "hellinger2"):
            raise ValueError(f"unknown divergence {self.divergence!r}")
        if self.generator == "dirichlet":
            if self.K < 2:
                raise ValueError("K must be at least 2")
            if not (self.alpha_true > 0 and self.beta_true > 0):
                raise ValueError("alpha_true and beta_true must be positive")
        else:
            if self.states < 2 or self.gram_length < 1:
                raise ValueError("markov generator needs states >= 2, gram_length >= 1")
        if not self.size_ladder:
            raise ValueError("size_ladder is empty")
        if any(n < 1 for n in self.size_ladder):
            raise ValueError("ladder sizes must be positive")
        if any(b <= a for a, b in zip(self.size_ladder, self.size_ladder[1:])):
            raise ValueError("size_ladder must be strictly increasing")
        if self.repetitions < 1:
            raise ValueError("repetitions must be at least 1")
        if not self.estimators:
            raise ValueError("no estimators selected")
        seen = set()
        for name in self.estimators:
            if name not in ESTIMATOR_NAMES:
                raise ValueError(f"unknown estimator {name!r}")
            if name in seen:
                raise ValueError(f"duplicate estimator {name!r}")
            seen.add(name)
        if "zhang" in self.estimators and self.divergence != "kl":
            raise ValueError("the zhang estimator is defined for KL only")
        if self.parent_size is not None and self.parent_size < max(self.size_ladder):
            raise ValueError("parent_size must cover the largest ladder size")
        if self.workers < 1:
            raise ValueError("workers must be at least 1")

    @property
    def category_count(self):
        if self.generator == "markov":
            return int(self.states**self.gram_length)
        return int(self.K)


def _apply_estimator(name, table, divergence):
    """Run one named estimator; returns (value, posterior_std or None)."""
    if name == "dpm":
        report = (
            est.estimate_dkl_dpm(table)
            if divergence == "kl"
            else est.estimate_hellinger_dpm(table)
        )
        return report.value, report.posterior_std
    if name == "dp":
        report = (
            est.estimate_dkl_dp(table)
            if divergence == "kl"
            else est.estimate_hellinger_dp(table)
        )
        return report.value, None
    if name == "zhang":
        return est.estimate_dkl_zhang(table), None
    if divergence == "kl":
        return est.estimate_dkl_plugin(table, name), None
    return est.estimate_hellinger_plugin(table, name), None


def _markov_specs(config, seed_pair):
    spec_q = synth.build_markov_spec(
        config.states, config.gram_length, np.random.default_rng(seed_pair[0])
    )
    spec_t = synth.build_markov_spec(
        config.states, config.gram_length, np.random.default_rng(seed_pair[1])
    )
    return spec_q, spec_t


def _markov_truth(config, spec_q, spec_t):
    if config.divergence == "kl":
        return synth.markov_crossentropy(spec_q, spec_t) - synth.markov_entropy(spec_q)
    return synth.exact_hellinger_sq(
        synth.lgram_distribution(spec_q), synth.lgram_distribution(spec_t)
    )


def _rep_rows(config, spec_q, spec_t, rep, rep_seed):
    """All rows of one repetition: one sample pair per ladder size."""
    K = config.category_count
    part = rep_seed.spawn(3)
    if config.generator == "dirichlet":
        q = synth.sample_dirichlet(K, config.alpha_true, np.random.default_rng(part[0]))
        t = synth.sample_dirichlet(K, config.beta_true, np.random.default_rng(part[1]))
        if config.divergence == "kl":
            truth = synth.exact_dkl(q, t)
        else:
            truth = synth.exact_hellinger_sq(q, t)
    else:
        truth = _markov_truth(config, spec_q, spec_t)
    draw = np.random.default_rng(part[2])

    def fresh_pair(size):
        if config.generator == "dirichlet":
            return (
                synth.sample_multinomial(q, size, draw),
                synth.sample_multinomial(t, size, draw),
            )
        return (
            synth.sample_lgrams(spec_q, size, draw),
            synth.sample_lgrams(spec_t, size, draw),
        )

    if config.nested_subsample:
        parent_size = config.parent_size or max(config.size_ladder)
        parent_n, parent_m = fresh_pair(parent_size)

        def sample_pair(size):
            if size == parent_size:
                return parent_n, parent_m
            return (
                draw.multivariate_hypergeometric(parent_n, size),
                draw.multivariate_hypergeometric(parent_m, size),
            )

    else:
        sample_pair = fresh_pair

    rows = []
    for size in config.size_ladder:
        n, m = sample_pair(size)
        table = build_table(n, m, K)
        for name in config.estimators:
            value, std = _apply_estimator(name, table, config.divergence)
            rows.append(Row(name, int(size), int(rep), float(value), float(truth), std))
    return rows


def _rep_rows_star(args):
    return _rep_rows(*args)


def run_convergence(config):
    """Run the full ladder x repetition grid; returns sorted rows."""
    root = np.random.SeedSequence(config.master_seed)
    chain_seeds = root.spawn(2)
    rep_seeds = root.spawn(config.repetitions)
    spec_q = spec_t = None
    if config.generator == "markov":
        spec_q, spec_t = _markov_specs(config, chain_seeds)
    tasks = [
        (config, spec_q, spec_t, rep, seed) for rep, seed in enumerate(rep_seeds)
    ]
    if config.workers > 1:
        with ProcessPoolExecutor(max_workers=config.workers) as pool:
            chunks = list(pool.map(_rep_rows_star, tasks))
    else:
        chunks = [_rep_rows(*task) for task in tasks]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r.estimator, r.N, r.rep))
    return rows


def write_rows_csv(rows, path):
    """Write `estimator,N,rep,estimate,true_value,posterior_std` rows.

    Floats are repr-formatted (shortest round trip) so identical runs
    produce byte-identical files; a missing posterior_std is an empty
    field.
    """
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["estimator", "N", "rep", "estimate", "true_value", "posterior_std"])
        for row in rows:
            writer.writerow(
                [
                    row.estimator,
                    row.N,
                    row.rep,
                    repr(float(row.estimate)),
                    repr(float(row.true_value)),
                    "" if row.posterior_std is None else repr(float(row.posterior_std)),
                ]
            )


def read_rows_csv(path):
    rows = []
    with open(path, newline="") as fh:
        for rec in csv.DictReader(fh):
            std = rec["posterior_std"]
            rows.append(
                Row(
                    rec["estimator"],
                    int(rec["N"]),
                    int(rec["rep"]),
                    float(rec["estimate"]),
                    float(rec["true_value"]),
                    None if std == "" else float(std),
                )
            )
    return rows


def compute_nstar(rows, *, normalized=False, band=0.05):
    """First-enter-then-stay convergence size per estimator.

    The mean curve is mean(estimate)/mean(truth) per size, or the mean of
    per-repetition normalized estimates when ``normalized`` is set (used
    for Markov runs, where each repetition shares one truth).  Returns
    {estimator: N* or None}.
    """
    curves = {}
    for row in rows:
        curves.setdefault(row.estimator, {}).setdefault(row.N, []).append(
            (row.estimate, row.true_value)
        )
    out = {}
    for name, by_size in curves.items():
        sizes = sorted(by_size)
        inside = []
        for size in sizes:
            pairs = by_size[size]
            if normalized:
                ratio = float(np.mean([e / t for e, t in pairs]))
            else:
                mean_true = float(np.mean([t for _, t in pairs]))
                if mean_true == 0.0:
                    inside.append(False)
                    continue
                ratio = float(np.mean([e for e, _ in pairs])) / mean_true
            inside.append(abs(ratio - 1.0) <= band)
        nstar = None
        for i, size in enumerate(sizes):
            if all(inside[i:]):
                nstar = size
                break
        out[name] = nstar
    return out


def run_nstar(config, alpha_values, beta_values):
    """Score a grid of truth concentrations; returns nstar CSV entries.

    Each (alpha_true, beta_true) cell reruns the convergence ladder with
    the same master seed and reduces it to N*/K per estimator.
    """
    if config.generator != "dirichlet":
        raise ValueError("the nstar grid sweeps Dirichlet truths")
    entries = []
    for a in alpha_values:
        for b in beta_values:
            cell = replace(config, alpha_true=float(a), beta_true=float(b))
            scores = compute_nstar(run_convergence(cell))
            for name in sorted(cell.estimators):
                nstar = scores.get(name)
                entries.append(
                    (
                        float(a),
                        float(b),
                        name,
                        None if nstar is None else nstar / cell.category_count,
                    )
                )
    return entries


def write_nstar_csv(entries, path):
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(["alpha_true", "beta_true", "estimator", "nstar_over_k"])
        for a, b, name, score in entries:
            writer.writerow(
                [repr(float(a)), repr(float(b)), name, "" if score is None else repr(float(score))]
            )
