"""Bayesian estimation of divergences between categorical samples.

Estimate Kullback-Leibler and squared Hellinger divergences between two
discrete distributions from count data, using Dirichlet-prior posterior
expectations either at the evidence maximum (DP) or averaged under a
divergence-flattening hyper-prior (DPM), alongside classic pseudo-count
plugins and the bias-corrected Z estimator.  Includes synthetic truth
generators and a convergence benchmark harness.
"""

from .benchmark import (
    ESTIMATOR_NAMES,
    ExperimentConfig,
    Row,
    compute_nstar,
    read_rows_csv,
    run_convergence,
    run_nstar,
    write_nstar_csv,
    write_rows_csv,
)
from .counts import (
    MultiplicityTable,
    build_table,
    load_count_files,
)
from .estimators import (
    PLUGIN_SCHEMES,
    EstimateReport,
    PosteriorMax,
    estimate_dkl_dp,
    estimate_dkl_dpm,
    estimate_dkl_plugin,
    estimate_dkl_zhang,
    estimate_entropy_nsb,
    estimate_hellinger_dp,
    estimate_hellinger_dpm,
    estimate_hellinger_plugin,
    maximize_log_posterior,
)
from .hyperprior import log_weight_hellinger, log_weight_kl
from .posterior import (
    HyperParams,
    log_evidence,
    posterior_dkl,
    posterior_dkl_squared,
    posterior_entropy,
    posterior_hellinger_sq,
    prior_mean_crossentropy,
    prior_mean_entropy,
)
from .synth import (
    MarkovChainSpec,
    build_markov_spec,
    exact_crossentropy,
    exact_dkl,
    exact_entropy,
    exact_hellinger_sq,
    lgram_distribution,
    markov_crossentropy,
    markov_entropy,
    sample_dirichlet,
    sample_lgrams,
    sample_multinomial,
)

__version__ = "0.1.0"

__all__ = [
    "ESTIMATOR_NAMES",
    "EstimateReport",
    "ExperimentConfig",
    "HyperParams",
    "MarkovChainSpec",
    "MultiplicityTable",
    "PLUGIN_SCHEMES",
    "PosteriorMax",
    "Row",
    "build_markov_spec",
    "build_table",
    "compute_nstar",
    "estimate_dkl_dp",
    "estimate_dkl_dpm",
    "estimate_dkl_plugin",
    "estimate_dkl_zhang",
    "estimate_entropy_nsb",
    "estimate_hellinger_dp",
    "estimate_hellinger_dpm",
    "estimate_hellinger_plugin",
    "exact_crossentropy",
    "exact_dkl",
    "exact_entropy",
    "exact_hellinger_sq",
    "lgram_distribution",
    "load_count_files",
    "log_evidence",
    "log_weight_hellinger",
    "log_weight_kl",
    "markov_crossentropy",
    "markov_entropy",
    "maximize_log_posterior",
    "posterior_dkl",
    "posterior_dkl_squared",
    "posterior_entropy",
    "posterior_hellinger_sq",
    "prior_mean_crossentropy",
    "prior_mean_entropy",
    "read_rows_csv",
    "run_convergence",
    "run_nstar",
    "sample_dirichlet",
    "sample_lgrams",
    "sample_multinomial",
    "write_nstar_csv",
    "write_rows_csv",
    "__version__",
]
