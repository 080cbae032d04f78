"""Flattening hyper-priors over the concentration parameters.

A symmetric Dirichlet prior pins the divergence close to its prior mean,
which depends only on the concentration.  Mixing over (alpha, beta) with
the weights below spreads that prior mean out so its natural transform is
log-uniform, removing the default-value bias of any single choice.

For the KL divergence the relevant coordinates are the prior mean entropy
A(alpha) (below ln K) and prior mean cross-entropy B(beta) (above ln K);
the weight makes z = B - A log-uniform.  For the squared Hellinger
distance the coordinate is z = 1 - g(alpha) g(beta), built from the prior
mean Bhattacharyya coefficient.

All functions return unnormalized log densities over the *linear*
(alpha, beta) measure; quadrature code adds the ln(alpha) + ln(beta)
Jacobian when integrating on log-spaced grids.
"""

import numpy as np

from .posterior import prior_mean_crossentropy, prior_mean_entropy
from .specfun import delta_psi, log_beta2, trigamma

__all__ = [
    "prior_entropy_slope",
    "prior_crossentropy_slope",
    "log_weight_kl",
    "bhattacharyya_factor",
    "bhattacharyya_factor_log_slope",
    "log_weight_hellinger",
]


def _positive(x, name):
    arr = np.asarray(x, dtype=float)
    if not np.all(np.isfinite(arr)) or np.any(arr <= 0):
        raise ValueError(f"{name} must be finite and positive")
    return arr


def _check_K(K):
    if not isinstance(K, (int, np.integer)) or K < 2:
        raise ValueError("K must be an integer >= 2")
    return int(K)


def prior_entropy_slope(alpha, K):
    """dA/dalpha = K psi_1(K alpha + 1) - psi_1(alpha + 1); positive."""
    a = _positive(alpha, "alpha")
    K = _check_K(K)
    return K * trigamma(K * a + 1.0) - trigamma(a + 1.0)


def prior_crossentropy_slope(beta, K):
    """dB/dbeta = K psi_1(K beta) - psi_1(beta); negative (B decreases)."""
    b = _positive(beta, "beta")
    K = _check_K(K)
    return K * trigamma(K * b) - trigamma(b)


def _log_phi_kl(z, K):
    # density of z = B - A made log-uniform: rho(z) ~ 1/z, divided by the
    # overlap length min(z, ln K) of the (A, B) strip at fixed z
    lnK = np.log(K)
    return np.where(z < lnK, -2.0 * np.log(z), -np.log(z) - np.log(lnK))


def log_weight_kl(alpha, beta, K):
    """ln of the KL flattening weight rho(alpha, beta), up to a constant.

    Composed of the two Jacobians |dA/dalpha|, |dB/dbeta| and the target
    density in z = B(beta) - A(alpha).
    """
    a = _positive(alpha, "alpha")
    b = _positive(beta, "beta")
    K = _check_K(K)
    z = prior_mean_crossentropy(b, K) - prior_mean_entropy(a, K)
    assert np.all(z > 0), "prior mean cross-entropy must exceed mean entropy"
    out = (
        np.log(prior_entropy_slope(a, K))
        + np.log(-prior_crossentropy_slope(b, K))
        + _log_phi_kl(z, K)
    )
    if np.ndim(alpha) == 0 and np.ndim(beta) == 0:
        return float(out)
    return out


# --- squared Hellinger ----------------------------------------------------

def _log_g(x, K):
    half = 0.5
    return 0.5 * np.log(K) + log_beta2(half, K * x) - log_beta2(half, x)


def bhattacharyya_factor(x, K):
    """g(x) = sqrt(K) B(1/2, Kx) / B(1/2, x): per-sample prior mean of the
    Bhattacharyya coefficient; increases from 0 toward 1."""
    xv = _positive(x, "x")
    K = _check_K(K)
    out = np.exp(_log_g(xv, K))
    if np.ndim(x) == 0:
        return float(out)
    return out


def bhattacharyya_factor_log_slope(x, K):
    """d ln g / dx, written as digamma differences to avoid cancellation."""
    xv = _positive(x, "x")
    K = _check_K(K)
    out = delta_psi(xv + 0.5, xv) - K * delta_psi(K * xv + 0.5, K * xv)
    if np.ndim(x) == 0:
        return float(out)
    return out


def log_weight_hellinger(alpha, beta, K):
    """ln of the Hellinger flattening weight, up to a constant.

    Makes z = 1 - g(alpha) g(beta) (the prior mean squared Hellinger
    distance) log-uniform after accounting for the bounded range of g.
    """
    a = _positive(alpha, "alpha")
    b = _positive(beta, "beta")
    K = _check_K(K)
    lg_a, lg_b = _log_g(a, K), _log_g(b, K)
    log_one_minus_z = lg_a + lg_b                    # ln(g g) <= 0
    z = -np.expm1(log_one_minus_z)                   # 1 - g g, in (0, 1)
    assert np.all((z > 0) & (z < 1)), "1 - g(alpha) g(beta) must lie in (0,1)"
    slope_a = bhattacharyya_factor_log_slope(a, K)
    slope_b = bhattacharyya_factor_log_slope(b, K)
    assert np.all(slope_a > 0) and np.all(slope_b > 0)
    # |dg/dx| = g * dlng/dx; target density rho(z)(1-z)^2/(z(2-z)) with
    # rho(z) ~ 1/z
    out = (
        lg_a + np.log(slope_a) + lg_b + np.log(slope_b)
        + 2.0 * log_one_minus_z - 2.0 * np.log(z) - np.log(2.0 - z)
    )
    if np.ndim(alpha) == 0 and np.ndim(beta) == 0:
        return float(out)
    return out
