"""Special-function layer: values against mpmath, identities, domains."""

import math

import mpmath
import numpy as np
import pytest

from bayesdiv.specfun import (
    delta_psi,
    digamma,
    log_beta2,
    log_gamma,
    log_multivariate_beta,
    trigamma,
)

mpmath.mp.dps = 40


# --- wrappers against mpmath ------------------------------------------------

@pytest.mark.parametrize("z", [1e-6, 0.037, 0.5, 1.0, 2.0, 17.25, 400.0, 1e6])
def test_log_gamma_matches_mpmath(z):
    assert log_gamma(z) == pytest.approx(float(mpmath.loggamma(z)), rel=1e-13)


@pytest.mark.parametrize("z", [1e-6, 0.037, 0.5, 1.0, 2.0, 17.25, 400.0, 1e6])
def test_digamma_matches_mpmath(z):
    assert digamma(z) == pytest.approx(float(mpmath.digamma(z)), rel=1e-12, abs=1e-12)


@pytest.mark.parametrize("z", [1e-6, 0.037, 0.5, 1.0, 2.0, 17.25, 400.0, 1e6])
def test_trigamma_matches_mpmath(z):
    truth = float(mpmath.polygamma(1, z))
    assert trigamma(z) == pytest.approx(truth, rel=1e-12)


def test_log_beta2_is_log_beta():
    for a, b in [(0.5, 0.5), (1.0, 3.0), (400.5, 0.5), (2e4, 1.0)]:
        truth = float(mpmath.log(mpmath.beta(a, b)))
        assert log_beta2(a, b) == pytest.approx(truth, rel=1e-12, abs=1e-12)


def test_wrappers_accept_arrays():
    z = np.array([0.5, 1.0, 2.0])
    assert log_gamma(z).shape == (3,)
    assert digamma(z).shape == (3,)
    assert trigamma(z).shape == (3,)


@pytest.mark.parametrize("fn", [log_gamma, digamma, trigamma])
def test_wrappers_reject_nonpositive(fn):
    with pytest.raises(ValueError):
        fn(0.0)
    with pytest.raises(ValueError):
        fn(-1.5)


# --- derivative ladder -------------------------------------------------------

def test_digamma_is_log_gamma_derivative():
    h = 1e-6
    for z in (0.3, 1.0, 7.5, 120.0):
        fd = (log_gamma(z + h) - log_gamma(z - h)) / (2 * h)
        assert fd == pytest.approx(digamma(z), rel=1e-7)


def test_trigamma_is_digamma_derivative():
    h = 1e-6
    for z in (0.3, 1.0, 7.5, 120.0):
        fd = (digamma(z + h) - digamma(z - h)) / (2 * h)
        assert fd == pytest.approx(trigamma(z), rel=1e-6)


# --- compressed multivariate Beta -------------------------------------------

def test_log_multivariate_beta_uniform_simplex():
    # B(1,1) over K=2 is 1, so the log vanishes
    assert log_multivariate_beta(np.array([1.0, 1.0])) == pytest.approx(0.0, abs=1e-14)


def test_log_multivariate_beta_matches_mpmath():
    values = np.array([1.5, 2.0, 0.5])
    truth = float(
        sum(mpmath.loggamma(v) for v in values) - mpmath.loggamma(sum(values))
    )
    assert log_multivariate_beta(values) == pytest.approx(truth, rel=1e-13)


def test_log_multivariate_beta_multiplicity_compression():
    values = np.array([0.5, 2.5])
    nu = np.array([3, 2])
    expanded = np.array([0.5, 0.5, 0.5, 2.5, 2.5])
    assert log_multivariate_beta(values, nu) == pytest.approx(
        log_multivariate_beta(expanded), rel=1e-14
    )


# --- digamma differences ------------------------------------------------------

def test_delta_psi_same_argument_is_zero():
    for x in (1e-5, 0.7, 3.0, 1e5):
        assert delta_psi(x, x) == 0.0


def test_delta_psi_telescoping_example():
    # integer gap reduces to a harmonic tail: psi(4) - psi(2) = 1/2 + 1/3
    assert delta_psi(4.0, 2.0) == pytest.approx(1 / 2 + 1 / 3, abs=1e-14)


def test_delta_psi_unit_recurrence():
    for z in (0.2, 1.0, 11.0, 4000.0):
        assert delta_psi(z + 1.0, z) == pytest.approx(1.0 / z, rel=1e-13)


def test_delta_psi_small_integer_example():
    assert delta_psi(2.0, 1.0) == pytest.approx(1.0, abs=1e-14)


def test_delta_psi_antisymmetry():
    rng = np.random.default_rng(5)
    for _ in range(20):
        a, b = np.exp(rng.uniform(-6, 6, size=2))
        assert delta_psi(a, b) == pytest.approx(-delta_psi(b, a), rel=1e-13, abs=1e-16)


def test_delta_psi_integer_gap_matches_harmonic_sum():
    z = 2.75
    gap = 137
    harmonic = math.fsum(1.0 / (z + k) for k in range(gap))
    assert delta_psi(z + gap, z) == pytest.approx(harmonic, rel=1e-13)


def test_delta_psi_against_mpmath_worst_cases():
    # mixes tiny bases, huge gaps, and near-equal arguments
    pairs = [
        (1e-6 + 40000.0, 1e-6),
        (1.5e-4, 1e-6),
        (400.0004, 400.0001),
        (2e7, 3.2),
        (0.5001, 0.5),
        (123456.789, 123456.0),
        (41.0, 0.003),
    ]
    for z1, z2 in pairs:
        truth = float(mpmath.digamma(z1) - mpmath.digamma(z2))
        got = delta_psi(z1, z2)
        assert got == pytest.approx(truth, rel=2e-13, abs=1e-15), (z1, z2)


def test_delta_psi_broadcasts():
    z1 = np.array([2.0, 3.0, 4.0])
    out = delta_psi(z1, 1.0)
    assert out.shape == (3,)
    assert out[2] == pytest.approx(1 + 1 / 2 + 1 / 3, abs=1e-13)


def test_delta_psi_rejects_nonpositive():
    with pytest.raises(ValueError):
        delta_psi(0.0, 1.0)
    with pytest.raises(ValueError):
        delta_psi(1.0, -2.0)
