"""Divergence and entropy estimators over count-pair tables.

Bayesian routes:

* DP: empirical Bayes.  Each sample's concentration is set by maximizing
  its own Dirichlet-multinomial evidence; the posterior mean at that
  single (alpha*, beta*) is the estimate.
* DPM: full mixture.  The posterior mean is averaged over (alpha, beta)
  against evidence times a flattening hyper-prior, integrated on a
  log-spaced trapezoid grid centered at the joint maximum with a width
  set by a Gaussian (Hessian) approximation.

Baselines: pseudo-count plugins (naive / jeffreys / trybula / perks), the
bias-corrected Z estimator for KL, and the evidence-mixture entropy
estimator (NSB) used for single samples.
"""

import math
from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import minimize

from .counts import MultiplicityTable, build_table
from .hyperprior import (
    log_weight_hellinger,
    log_weight_kl,
    prior_entropy_slope,
)
from .posterior import (
    HyperParams,
    dkl_grid,
    dkl_squared_grid,
    entropy_grid,
    hellinger_sq_grid,
    log_evidence,
    log_evidence_grid,
    log_evidence_gradient,
    posterior_dkl,
    posterior_hellinger_sq,
)

__all__ = [
    "EstimateReport",
    "PosteriorMax",
    "maximize_log_posterior",
    "estimate_dkl_dpm",
    "estimate_dkl_dp",
    "estimate_hellinger_dpm",
    "estimate_hellinger_dp",
    "estimate_dkl_plugin",
    "estimate_hellinger_plugin",
    "estimate_dkl_zhang",
    "estimate_entropy_nsb",
    "PLUGIN_SCHEMES",
]

_LOG_LO = math.log(1e-6)
_LOG_HI = math.log(1e6)
_STARTS = [math.log(s) for s in (1e-4, 1e-2, 1.0, 1e2, 1e4)]
_HESS_STEP = 0.05
_EDGE_TOL = 1e-6
_FD_STEP = 1e-6

PLUGIN_SCHEMES = ("naive", "jeffreys", "trybula", "perks")


@dataclass
class EstimateReport:
    """Estimate plus run metadata.

    ``posterior_std`` is only filled by the KL mixture estimator (the one
    with a second-moment formula); everything else reports None.
    """

    value: float
    posterior_std: float | None = None
    diagnostics: dict = field(default_factory=dict)


@dataclass
class PosteriorMax:
    """Maximizer of a log objective over (ln alpha, ln beta)."""

    alpha_star: float
    beta_star: float
    std_log_alpha: float
    std_log_beta: float
    log_objective: float
    boundary_alpha: bool = False
    boundary_beta: bool = False


def _check_table(table, bayes=False):
    if not isinstance(table, MultiplicityTable):
        raise ValueError("expected a MultiplicityTable")
    if bayes and table.K < 2:
        raise ValueError("Bayesian estimators need K >= 2")
    return table


def _bins_for(K, total):
    """Trapezoid nodes per axis: 10 (K/total)^2 clamped to [20, 2000]."""
    if total <= 0:
        return 2000
    return int(min(2000, max(20, round(10.0 * (K / total) ** 2))))


def _maximize(fun_grad, n_dim):
    """L-BFGS-B from log-spaced multistarts; returns (u_vec, objective)."""
    bounds = [(_LOG_LO, _LOG_HI)] * n_dim
    best = None
    for s in _STARTS:
        res = minimize(
            fun_grad,
            x0=np.full(n_dim, s),
            jac=True,
            method="L-BFGS-B",
            bounds=bounds,
        )
        if best is None or res.fun < best.fun:
            best = res
    return np.asarray(best.x, dtype=float), -float(best.fun)


def _curvature_std(f_1d, u_star):
    """Gaussian std from a second difference of the log objective.

    Falls back to 1.0 (a +-3 log-unit window) when the curvature is not
    negative, which happens on flat or edge-pinned objectives.
    """
    lo = max(u_star - _HESS_STEP, _LOG_LO)
    hi = min(u_star + _HESS_STEP, _LOG_HI)
    h1, h2 = u_star - lo, hi - u_star
    if min(h1, h2) < 0.25 * _HESS_STEP:
        return 1.0
    fa, fb, fc = f_1d(lo), f_1d(u_star), f_1d(hi)
    hess = 2.0 * (
        fa / (h1 * (h1 + h2)) - fb / (h1 * h2) + fc / (h2 * (h1 + h2))
    )
    if not np.isfinite(hess) or hess >= -1e-12:
        return 1.0
    return float(1.0 / math.sqrt(-hess))


def _at_edge(u):
    return u <= _LOG_LO + _EDGE_TOL or u >= _LOG_HI - _EDGE_TOL


def _log_prior_for(divergence):
    if divergence == "kl":
        return log_weight_kl
    if divergence == "hellinger2":
        return log_weight_hellinger
    raise ValueError(f"unknown divergence {divergence!r}")


def maximize_log_posterior(table, weight="dpm", divergence="kl"):
    """Maximize the evidence ("dp") or evidence + hyper-prior ("dpm").

    Works in (ln alpha, ln beta) over the box [1e-6, 1e6]^2.  For "dp"
    the objective separates and each coordinate is maximized on its own;
    for "dpm" the joint objective includes the flattening weight and the
    ln alpha + ln beta measure term, so the maximum and curvature match
    the integrand used in quadrature.  An empty sample leaves its
    coordinate flat: it is pinned at 1.0 and flagged as boundary.
    """
    _check_table(table, bayes=True)
    mode = str(weight).lower()
    if mode == "dp":
        out = []
        for which, total in ((1, table.N), (2, table.M)):
            if total == 0:
                # flat evidence: pin the scale at 1, widest fallback window
                out.append((1.0, 0.0, 1.0, True))
                continue

            def fun(u, _w=which):
                a = math.exp(float(u[0]))
                f = log_evidence(table, a, _w)
                g = a * log_evidence_gradient(table, a, _w)
                return -f, np.array([-g])

            u_best, f_best = _maximize(fun, 1)
            u0 = float(u_best[0])
            sd = _curvature_std(
                lambda t, _w=which: log_evidence(table, math.exp(t), _w), u0
            )
            out.append((math.exp(u0), f_best, sd, _at_edge(u0)))
        (a_star, f_a, sd_a, edge_a), (b_star, f_b, sd_b, edge_b) = out
        return PosteriorMax(
            alpha_star=a_star,
            beta_star=b_star,
            std_log_alpha=sd_a,
            std_log_beta=sd_b,
            log_objective=f_a + f_b,
            boundary_alpha=edge_a,
            boundary_beta=edge_b,
        )
    if mode != "dpm":
        raise ValueError("weight must be 'dp' or 'dpm'")

    log_prior = _log_prior_for(divergence)
    K = table.K

    def prior_part(u, v):
        return (
            log_prior(math.exp(u), math.exp(v), K) + u + v
        )

    def objective(u, v):
        f = prior_part(u, v)
        if table.N:
            f += log_evidence(table, math.exp(u), 1)
        if table.M:
            f += log_evidence(table, math.exp(v), 2)
        return f

    def fun(uv):
        u, v = float(uv[0]), float(uv[1])
        a, b = math.exp(u), math.exp(v)
        f = objective(u, v)
        gu = 1.0 + (
            a * log_evidence_gradient(table, a, 1) if table.N else 0.0
        )
        gv = 1.0 + (
            b * log_evidence_gradient(table, b, 2) if table.M else 0.0
        )
        # hyper-prior slope by central differences; smooth and cheap
        gu += (
            log_prior(math.exp(u + _FD_STEP), b, K)
            - log_prior(math.exp(u - _FD_STEP), b, K)
        ) / (2.0 * _FD_STEP)
        gv += (
            log_prior(a, math.exp(v + _FD_STEP), K)
            - log_prior(a, math.exp(v - _FD_STEP), K)
        ) / (2.0 * _FD_STEP)
        return -f, np.array([-gu, -gv])

    u_best, f_best = _maximize(fun, 2)
    u0, v0 = float(u_best[0]), float(u_best[1])
    sd_a = _curvature_std(lambda t: objective(t, v0), u0)
    sd_b = _curvature_std(lambda t: objective(u0, t), v0)
    return PosteriorMax(
        alpha_star=math.exp(u0),
        beta_star=math.exp(v0),
        std_log_alpha=sd_a,
        std_log_beta=sd_b,
        log_objective=f_best,
        boundary_alpha=_at_edge(u0),
        boundary_beta=_at_edge(v0),
    )


# --- quadrature -----------------------------------------------------------

def _window_nodes(center_log, std_log, bins):
    lo = max(center_log - 3.0 * std_log, _LOG_LO)
    hi = min(center_log + 3.0 * std_log, _LOG_HI)
    if hi <= lo:
        return np.array([max(min(center_log, _LOG_HI), _LOG_LO)])
    return np.linspace(lo, hi, int(bins))


def _trapezoid_weights(nodes):
    if len(nodes) < 2:
        return np.ones(len(nodes))
    w = np.full(len(nodes), nodes[1] - nodes[0])
    w[0] *= 0.5
    w[-1] *= 0.5
    return w


def _mixture_average(log_w, cell_w, grids):
    """Ratio averages sum(w * grid)/sum(w) with max-rescaled log weights."""
    scaled = np.exp(log_w - log_w.max()) * cell_w
    den = scaled.sum()
    if not np.isfinite(den) or den <= 0.0:
        return None
    return [float((scaled * g).sum() / den) for g in grids]


def _diagnostics(mx, bins_a, bins_b):
    return {
        "alpha_star": mx.alpha_star,
        "beta_star": mx.beta_star,
        "std_log_alpha": mx.std_log_alpha,
        "std_log_beta": mx.std_log_beta,
        "grid_bins_alpha": int(bins_a),
        "grid_bins_beta": int(bins_b),
        "log_evidence_at_max": mx.log_objective,
        "boundary_alpha": mx.boundary_alpha,
        "boundary_beta": mx.boundary_beta,
        "jacobian": "alpha*beta d(ln alpha) d(ln beta)",
    }


def _canonical_orientation(table):
    """Deterministic sample order for exactly swap-symmetric estimators.

    The squared-Hellinger construction is symmetric in the two samples,
    but a joint numerical maximization is not bit-exact under swapping
    them.  Computing on a canonical orientation restores exact symmetry.
    """
    order = np.lexsort((table.n, table.m))
    n, m = table.m[order].copy(), table.n[order].copy()
    nu = table.nu[order].copy()
    kept = (table.N, table.M,
            table.n.tobytes(), table.m.tobytes(), table.nu.tobytes())
    swapped = (table.M, table.N, n.tobytes(), m.tobytes(), nu.tobytes())
    if kept <= swapped:
        return table
    for arr in (n, m, nu):
        arr.setflags(write=False)
    return MultiplicityTable(n=n, m=m, nu=nu, K=table.K, N=table.M, M=table.N)


def _dpm_report(table, divergence, bins_alpha=None, bins_beta=None):
    _check_table(table, bayes=True)
    if divergence == "hellinger2":
        table = _canonical_orientation(table)
    K = table.K
    mx = maximize_log_posterior(table, "dpm", divergence)
    bins_a = bins_alpha if bins_alpha else _bins_for(K, table.N)
    bins_b = bins_beta if bins_beta else _bins_for(K, table.M)
    ua = _window_nodes(math.log(mx.alpha_star), mx.std_log_alpha, bins_a)
    ub = _window_nodes(math.log(mx.beta_star), mx.std_log_beta, bins_b)
    alphas, betas = np.exp(ua), np.exp(ub)
    log_prior = _log_prior_for(divergence)
    log_w = (
        log_evidence_grid(table, alphas, 1)[:, None]
        + log_evidence_grid(table, betas, 2)[None, :]
        + log_prior(alphas[:, None], betas[None, :], K)
        + ua[:, None]
        + ub[None, :]
    )
    cell_w = np.outer(_trapezoid_weights(ua), _trapezoid_weights(ub))
    diag = _diagnostics(mx, len(ua), len(ub))
    hp_star = HyperParams(mx.alpha_star, mx.beta_star, K)
    if divergence == "kl":
        grids = [
            dkl_grid(table, alphas, betas),
            dkl_squared_grid(table, alphas, betas),
        ]
        averaged = _mixture_average(log_w, cell_w, grids)
        if averaged is None:
            diag["degenerate_grid"] = True
            return EstimateReport(posterior_dkl(table, hp_star), 0.0, diag)
        value, second = averaged
        spread = math.sqrt(max(0.0, second - value * value))
        return EstimateReport(value, spread, diag)
    averaged = _mixture_average(
        log_w, cell_w, [hellinger_sq_grid(table, alphas, betas)]
    )
    if averaged is None:
        diag["degenerate_grid"] = True
        return EstimateReport(posterior_hellinger_sq(table, hp_star), None, diag)
    return EstimateReport(averaged[0], None, diag)


def estimate_dkl_dpm(table, *, bins_alpha=None, bins_beta=None):
    """Mixture estimate of D_KL(q||t) with its posterior spread.

    The bins arguments override the grid-resolution heuristic; they exist
    for convergence diagnostics.
    """
    return _dpm_report(table, "kl", bins_alpha, bins_beta)


def estimate_hellinger_dpm(table, *, bins_alpha=None, bins_beta=None):
    """Mixture estimate of the squared Hellinger distance DH^2(q, t)."""
    return _dpm_report(table, "hellinger2", bins_alpha, bins_beta)


def estimate_dkl_dp(table):
    """Posterior mean D_KL at the per-sample evidence maximizers."""
    _check_table(table, bayes=True)
    mx = maximize_log_posterior(table, "dp")
    hp = HyperParams(mx.alpha_star, mx.beta_star, table.K)
    return EstimateReport(posterior_dkl(table, hp), None, _diagnostics(mx, 0, 0))


def estimate_hellinger_dp(table):
    """Posterior mean DH^2 at the per-sample evidence maximizers."""
    _check_table(table, bayes=True)
    mx = maximize_log_posterior(table, "dp")
    hp = HyperParams(mx.alpha_star, mx.beta_star, table.K)
    return EstimateReport(
        posterior_hellinger_sq(table, hp), None, _diagnostics(mx, 0, 0)
    )


# --- plugins and Z --------------------------------------------------------

def _pseudo_counts(table, scheme):
    if scheme == "naive":
        return 0.0, 0.0
    if scheme == "jeffreys":
        return 0.5, 0.5
    if scheme == "trybula":
        return math.sqrt(table.N) / table.K, math.sqrt(table.M) / table.K
    if scheme == "perks":
        k1 = table.observed_categories(1)
        k2 = table.observed_categories(2)
        if k1 == 0 or k2 == 0:
            raise ValueError("perks pseudo-counts need a non-empty sample")
        return 1.0 / k1, 1.0 / k2
    raise ValueError(f"unknown plugin scheme {scheme!r}")


def _plugin_frequencies(table, scheme):
    a, b = _pseudo_counts(table, scheme)
    q_den = table.N + table.K * a
    t_den = table.M + table.K * b
    if q_den <= 0 or t_den <= 0:
        raise ValueError(f"{scheme} plugin undefined for an empty sample")
    q = (table.n + a) / q_den
    t = (table.m + b) / t_den
    return q, t


def estimate_dkl_plugin(table, scheme):
    """Plugin D_KL from pseudo-count frequencies.

    With zero pseudo-counts the terms where the second sample is empty
    are dropped (the naive convention); zero-numerator terms vanish as
    0 ln 0 = 0.
    """
    _check_table(table)
    q, t = _plugin_frequencies(table, scheme)
    keep = (q > 0) & (t > 0)
    nu = table.nu[keep].astype(float)
    qk, tk = q[keep], t[keep]
    return float(np.dot(nu, qk * (np.log(qk) - np.log(tk))))


def estimate_hellinger_plugin(table, scheme):
    """Plugin DH^2 = 1 - sum_i sqrt(q_i t_i) from pseudo-count frequencies."""
    _check_table(table)
    q, t = _plugin_frequencies(table, scheme)
    return float(1.0 - np.dot(table.nu.astype(float), np.sqrt(q * t)))


def estimate_dkl_zhang(table):
    """Bias-corrected KL estimate (resummed closed form).

    sum_i (n_i/N) [psi(M+1) - psi(m_i+1) - psi(N) + psi(n_i)]; categories
    absent from the first sample contribute nothing.
    """
    _check_table(table)
    if table.N < 1:
        raise ValueError("Z estimator needs a non-empty first sample")
    from .specfun import delta_psi

    keep = table.n > 0
    n = table.n[keep].astype(float)
    m = table.m[keep].astype(float)
    nu = table.nu[keep].astype(float)
    cross = delta_psi(np.full_like(m, table.M + 1.0), m + 1.0)
    ent = delta_psi(np.full_like(n, float(table.N)), n)
    return float(np.dot(nu, (n / table.N) * (cross - ent)))


# --- entropy mixture (single sample) ---------------------------------------

def estimate_entropy_nsb(counts, K):
    """Evidence-mixture entropy estimate for one sample of counts.

    The weight over alpha is evidence times the entropy-flattening prior
    |dA/dalpha|, integrated on a log grid like the divergence mixtures.
    """
    counts = np.asarray(counts)
    table = build_table(counts, np.zeros(len(counts), dtype=np.int64), K)
    _check_table(table, bayes=True)

    def objective(u):
        a = math.exp(u)
        return (
            log_evidence(table, a, 1)
            + math.log(prior_entropy_slope(a, table.K))
            + u
        )

    def fun(u_arr):
        u = float(u_arr[0])
        a = math.exp(u)
        f = objective(u)
        g = 1.0 + a * log_evidence_gradient(table, a, 1)
        g += (
            math.log(prior_entropy_slope(math.exp(u + _FD_STEP), table.K))
            - math.log(prior_entropy_slope(math.exp(u - _FD_STEP), table.K))
        ) / (2.0 * _FD_STEP)
        return -f, np.array([-g])

    u_best, f_best = _maximize(fun, 1)
    u0 = float(u_best[0])
    sd = _curvature_std(objective, u0)
    bins = _bins_for(table.K, table.N)
    ua = _window_nodes(u0, sd, bins)
    alphas = np.exp(ua)
    log_w = (
        log_evidence_grid(table, alphas, 1)
        + np.log(prior_entropy_slope(alphas, table.K))
        + ua
    )
    averaged = _mixture_average(
        log_w, _trapezoid_weights(ua), [entropy_grid(table, alphas, 1)]
    )
    mx = PosteriorMax(
        alpha_star=math.exp(u0),
        beta_star=float("nan"),
        std_log_alpha=sd,
        std_log_beta=float("nan"),
        log_objective=f_best,
        boundary_alpha=_at_edge(u0),
    )
    diag = _diagnostics(mx, len(ua), 0)
    if averaged is None:
        diag["degenerate_grid"] = True
        from .posterior import posterior_entropy

        return EstimateReport(
            posterior_entropy(table, mx.alpha_star, 1), None, diag
        )
    return EstimateReport(averaged[0], None, diag)
