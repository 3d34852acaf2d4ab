import math

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from scipy.optimize import brentq

from twoproj.ensembles import selberg_log_z
from twoproj.errors import ParameterError, UnsupportedFunctionError
from twoproj.limits import minimizer_for, minimizer_pqp, quantile_cloud
from twoproj.rate import (
    b_function,
    free_entropy,
    log_energy,
    rate_contracted,
    rate_params,
    rate_tilde,
    rate_ts,
)
from twoproj.spectra import ANTICOMMUTATOR, PQP, UNITARY_PRODUCT, SpectralMeasure, linear
from twoproj.tracial import TracialState, free_state, freeness_atoms, psi_map, pushforward

LOG2 = math.log(2)
UNIFORM_GAP = 3 / 8 - LOG2 / 2
CATALOG = [PQP, ANTICOMMUTATOR, linear(2.0, -1.0), linear(1.0, 1.0), UNITARY_PRODUCT]


def _uniform(n=2000):
    return (np.arange(n) + 0.5) / n


def _cloud(x):
    return SpectralMeasure([], x, 1.0)


# ---------------------------------------------------------------- B and constants


def test_b_function_examples():
    assert b_function(0, 0) == pytest.approx(-2 * LOG2, abs=1e-14)
    assert b_function(1, 0) == pytest.approx(4 * LOG2 - 4.5 * math.log(3), abs=1e-14)
    assert b_function(1.7, 0.3) == pytest.approx(b_function(0.3, 1.7), abs=1e-14)
    with pytest.raises(ParameterError):
        b_function(-0.1, 0)


def test_b_function_matches_selberg_trend():
    errs = [abs(selberg_log_z(N, N, 0) / N**2 - b_function(1, 0)) for N in (64, 128, 256)]
    assert errs[0] > errs[1] > errs[2] and errs[2] < 0.05


@given(st.floats(0, 3), st.floats(0, 3))
def test_b_function_is_the_selberg_limit(s, t):
    # Richardson extrapolation of N^-2 log Z(N, sN, tN), which has an O(log N / N) error
    def f(N):
        return selberg_log_z(N, s * N, t * N) / N**2

    est = 2 * f(4096) - f(2048)
    assert b_function(s, t) == pytest.approx(est, abs=2e-3)


def test_rate_params_examples():
    p = rate_params(0.5, 0.5)
    assert (p.rho, p.kappa, p.lam) == (0.5, 0.0, 0.0)
    assert p.C == pytest.approx(-LOG2 / 2, abs=1e-14)
    p = rate_params(0.3, 0.6)
    assert (p.rho, p.kappa, p.lam) == pytest.approx((0.3, 0.3, 0.1))
    assert p.C == pytest.approx(0.09 * b_function(1, 1 / 3), abs=1e-14)
    p = rate_params(0.0, 0.7)
    assert p.rho == 0 and p.C == 0
    with pytest.raises(ParameterError):
        rate_params(-0.1, 0.5)


@given(st.floats(0, 1), st.floats(0, 1))
def test_max_weight_identity(a, b):
    p = rate_params(a, b)
    assert p.max_weight == pytest.approx(p.rho + p.kappa + p.lam, abs=1e-12)


# ---------------------------------------------------------------- log energy


def test_log_energy_examples():
    assert log_energy(SpectralMeasure([(0.3, 1.0)])) == -math.inf
    assert log_energy(_cloud(_uniform())) == pytest.approx(-1.5, abs=5e-3)
    arcsine = quantile_cloud(minimizer_pqp(0.5, 0.5)).normalized_cloud()
    assert log_energy(arcsine) == pytest.approx(-2 * LOG2, abs=5e-3)
    assert log_energy(_cloud([0.4])) == -math.inf


def test_log_energy_closed_form_oracles():
    # independent 2-d quadrature of the uniform energy, done analytically: -3/2
    from scipy.integrate import dblquad

    val, _ = dblquad(lambda y, x: math.log(abs(x - y)) if x != y else 0.0, 0, 1, 0, lambda x: x)
    assert 2 * val == pytest.approx(-1.5, abs=1e-6)


def test_log_energy_scales_with_mass():
    x = _uniform(300)
    assert log_energy(SpectralMeasure([], x, 0.5)) == pytest.approx(0.25 * log_energy(_cloud(x)), rel=1e-12)


def test_log_energy_coincident_points_flagged():
    with pytest.warns(RuntimeWarning):
        assert log_energy(_cloud([0.1, 0.5, 0.5])) == -math.inf


def test_log_energy_order_independent():
    x = np.random.default_rng(1).uniform(size=700)
    assert log_energy(_cloud(x)) == pytest.approx(log_energy(_cloud(np.sort(x))), rel=1e-12)


# ---------------------------------------------------------------- rate_tilde


def test_rate_tilde_examples():
    q = quantile_cloud(minimizer_pqp(0.5, 0.5))
    assert abs(rate_tilde(q, 0.5, 0.5)) <= 1e-2
    u = SpectralMeasure([(0.0, 0.5)], _uniform(), 0.5)
    assert rate_tilde(u, 0.5, 0.5) == pytest.approx(UNIFORM_GAP, abs=2e-3)
    bad = SpectralMeasure([(0.0, 0.4)], _uniform(), 0.6)
    assert rate_tilde(bad, 0.5, 0.5) == math.inf


def test_rate_tilde_infinite_cases():
    extra_atom = SpectralMeasure([(0.0, 0.5), (0.3, 0.1)], _uniform(), 0.4)
    assert rate_tilde(extra_atom, 0.5, 0.5) == math.inf
    touches_edge = SpectralMeasure([(0.0, 0.5)], np.r_[0.0, _uniform(9)], 0.5)
    assert rate_tilde(touches_edge, 0.5, 0.5) == math.inf
    wrong_mass = SpectralMeasure([(0.0, 0.5)], _uniform(), 0.4)
    assert rate_tilde(wrong_mass, 0.5, 0.5) == math.inf


def test_rate_tilde_degenerate_rho():
    assert rate_tilde(SpectralMeasure([(0.0, 1.0)]), 0.0, 0.4) == 0.0
    assert rate_tilde(SpectralMeasure([(0.0, 0.5)], [0.5], 0.5), 0.0, 0.4) == math.inf
    assert rate_tilde(SpectralMeasure([(0.0, 0.6), (1.0, 0.4)]), 1.0, 0.4) == 0.0


@pytest.mark.parametrize("ab", [(0.5, 0.5), (0.3, 0.6), (0.7, 0.8), (0.2, 0.1)])
def test_minimizer_is_near_zero(ab):
    assert abs(rate_tilde(quantile_cloud(minimizer_pqp(*ab)), *ab)) <= 1e-2


def _mixture_cloud(alpha, beta, eps, n=2000):
    """Quantile cloud of (1 - eps) * (minimizer's mu) + eps * uniform(0, 1)."""
    law = minimizer_pqp(alpha, beta)
    xi, eta = law.support[0]

    def F(x):
        return (1 - eps) * law.continuous_cdf(x) + eps * x

    levels = (np.arange(n) + 0.5) / n
    pts = [brentq(lambda x: F(x) - u, 0.0, 1.0, xtol=1e-15) for u in levels]
    rho = rate_params(alpha, beta).rho
    return SpectralMeasure(law.atoms, pts, rho)


@pytest.mark.parametrize("ab", [(0.5, 0.5), (0.3, 0.6)])
def test_minimizer_is_locally_unique(ab):
    vals = [rate_tilde(_mixture_cloud(*ab, e), *ab) for e in (0.0, 0.1, 0.2)]
    assert vals[0] < vals[1] < vals[2]


@given(st.integers(0, 2**32))
def test_midpoint_convexity(seed):
    rng = np.random.default_rng(seed)
    alpha, beta = 0.3, 0.6
    atoms = [(0.0, 0.7)]
    m1 = np.sort(rng.beta(*rng.uniform(0.5, 3, 2), size=300))
    m2 = np.sort(rng.beta(*rng.uniform(0.5, 3, 2), size=300))
    r1 = rate_tilde(SpectralMeasure(atoms, m1, 0.3), alpha, beta)
    r2 = rate_tilde(SpectralMeasure(atoms, m2, 0.3), alpha, beta)
    mid = rate_tilde(SpectralMeasure(atoms, np.r_[m1, m2], 0.3), alpha, beta)
    assert mid <= 0.5 * (r1 + r2) + 1e-2


# ---------------------------------------------------------------- states


def _random_free_state(rng, alpha, beta, n=400):
    return TracialState(*freeness_atoms(alpha, beta), mu=_cloud(np.sort(rng.beta(*rng.uniform(0.5, 3, 2), size=n))))


def test_rate_ts_examples():
    for ab in [(0.5, 0.5), (0.3, 0.6)]:
        assert abs(rate_ts(free_state(*ab), *ab)) <= 1e-2
    tau = free_state(0.3, 0.6)
    bumped = TracialState(tau.a11 + 0.1, tau.a10, tau.a01, tau.a00, mu=tau.mu)
    assert rate_ts(bumped, 0.3, 0.6) == math.inf


def test_rate_ts_equals_rate_tilde_through_psi():
    rng = np.random.default_rng(7)
    for _ in range(100):
        alpha, beta = rng.uniform(0.05, 0.95, 2)
        tau = _random_free_state(rng, alpha, beta, n=60)
        a, b, mt = psi_map(tau)
        assert rate_ts(tau, alpha, beta) == pytest.approx(rate_tilde(mt, a, b), abs=1e-9)


def test_free_entropy_examples():
    assert abs(free_entropy(free_state(0.5, 0.5))) <= 1e-2
    tau = TracialState(0, 0, 0, 0, mu=_cloud(_uniform()))
    assert free_entropy(tau) == pytest.approx(-UNIFORM_GAP, abs=2e-3)
    # traces (0.6, 0.5) force a10 = 0.1; a state with a10 = 0 and a11 = 0.1 is not free
    assert free_entropy(TracialState(0.1, 0.0, 0.0, 0.1, mu=_cloud(_uniform(50)))) == -math.inf


@given(st.integers(0, 2**32))
def test_nonnegativity(seed):
    rng = np.random.default_rng(seed)
    alpha, beta = rng.uniform(0.05, 0.95, 2)
    tau = _random_free_state(rng, alpha, beta, n=200)
    assert rate_ts(tau, alpha, beta) >= -1e-2
    assert free_entropy(tau) <= 1e-2
    for h in CATALOG:
        assert rate_contracted(pushforward(tau, h), h, alpha, beta) >= -1e-2


# ---------------------------------------------------------------- contracted rates


@pytest.mark.parametrize("h", CATALOG, ids=str)
@pytest.mark.parametrize("ab", [(0.5, 0.5), (0.3, 0.6), (0.7, 0.8)])
def test_contracted_minimizer_near_zero(h, ab):
    assert abs(rate_contracted(pushforward(free_state(*ab), h), h, *ab)) <= 1e-2


@pytest.mark.parametrize("h", [PQP, UNITARY_PRODUCT, linear(2.0, -1.0), linear(1.0, 1.0)], ids=str)
def test_contracted_limit_law_clouds_near_zero(h):
    assert abs(rate_contracted(quantile_cloud(minimizer_for(h, 0.3, 0.6)), h, 0.3, 0.6)) <= 1e-2


@pytest.mark.parametrize("h", CATALOG, ids=str)
def test_contracted_consistent_with_state_rate(h):
    rng = np.random.default_rng(hash(str(h)) % 2**32)
    for _ in range(20):
        alpha, beta = rng.uniform(0.05, 0.95, 2)
        tau = _random_free_state(rng, alpha, beta, n=300)
        assert rate_contracted(pushforward(tau, h), h, alpha, beta) == pytest.approx(rate_ts(tau, alpha, beta), abs=1e-2)


def test_contracted_asymmetric_linear_is_infinite():
    nu = SpectralMeasure([], [0.2, 0.5, 1.5, 1.9], 1.0)
    assert rate_contracted(nu, linear(1, 1), 0.5, 0.5) == math.inf


def test_contracted_shape_failures():
    tau = free_state(0.3, 0.6, 200)
    anti = pushforward(tau, ANTICOMMUTATOR)
    shifted = SpectralMeasure(anti.atoms, anti.cloud + 1e-4 * (anti.cloud > 0), anti.cloud_mass)
    assert rate_contracted(shifted, ANTICOMMUTATOR, 0.3, 0.6) == math.inf
    uni = pushforward(tau, UNITARY_PRODUCT)
    one_sided = SpectralMeasure(uni.atoms, np.abs(uni.cloud), uni.cloud_mass)
    assert rate_contracted(one_sided, UNITARY_PRODUCT, 0.3, 0.6) == math.inf
    wrong = SpectralMeasure([(0.0, 0.5)], uni.cloud, 0.5)
    assert rate_contracted(wrong, UNITARY_PRODUCT, 0.3, 0.6) == math.inf
    with pytest.raises(UnsupportedFunctionError):
        rate_contracted(anti, "anticommutator", 0.3, 0.6)


@pytest.mark.parametrize("a,b", [(2.0, -1.0), (1.0, 1.0), (-0.5, 3.0)])
def test_linear_scaling_identity(a, b):
    tau = free_state(0.3, 0.6, 1000)
    nu = pushforward(tau, linear(a, b)).normalized_cloud()
    sigma_mu = log_energy(tau.mu)
    assert sigma_mu == pytest.approx(2 * log_energy(nu) - math.log(abs(a * b)), abs=5e-3)


@given(st.floats(0, 1), st.floats(0, 1))
def test_constant_matches_b_function(a, b):
    p = rate_params(a, b)
    assert math.isfinite(p.C)
    if p.rho > 1e-3:
        assert p.C == pytest.approx(p.rho**2 * b_function(p.kappa / p.rho, p.lam / p.rho), abs=1e-12)


def test_constant_vanishes_continuously():
    assert abs(rate_params(1e-300, 0.5).C) < 1e-12
    assert abs(rate_params(1e-6, 0.5).C) < 1e-5
