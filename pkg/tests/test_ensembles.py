import math

import numpy as np
import pytest
import sympy as sp
from hypothesis import given
from hypothesis import strategies as st

from twoproj.ensembles import (
    canonical_pair,
    sample_jacobi,
    sample_pair,
    selberg_log_z,
    spectrum_params,
    two_by_two_pair,
)
from twoproj.errors import ParameterError
from twoproj.linalg import hermitian_eigs, is_projection
from twoproj.rng import RngStream
from twoproj.tolerances import ATOM_TOL


def _exact_selberg(n, kappa, lam):
    """Exact rational value of the unnormalized Jacobi integral, by symbolic integration."""
    xs = sp.symbols(f"x0:{n}")
    f = sp.Integer(1)
    for x in xs:
        f *= x**kappa * (1 - x) ** lam
    for i in range(n):
        for j in range(i + 1, n):
            f *= (xs[i] - xs[j]) ** 2
    for x in xs:
        f = sp.integrate(sp.expand(f), (x, 0, 1))
    return sp.Rational(f)


@pytest.mark.parametrize("n,kappa,lam", [(1, 0, 0), (2, 0, 0), (2, 1, 1), (3, 2, 1), (3, 0, 0)])
def test_selberg_matches_symbolic_integral(n, kappa, lam):
    exact = float(_exact_selberg(n, kappa, lam))
    assert math.exp(selberg_log_z(n, kappa, lam)) == pytest.approx(exact, rel=1e-12)


def test_selberg_examples():
    assert selberg_log_z(1, 0, 0) == pytest.approx(0.0, abs=1e-14)
    assert selberg_log_z(2, 0, 0) == pytest.approx(math.log(1 / 6), abs=1e-12)


def test_selberg_one_dimensional_is_beta_function():
    for k, l in [(0, 0), (2, 1), (5, 3), (1.5, 0.5)]:  # noqa: E741
        beta = math.exp(math.lgamma(k + 1) + math.lgamma(l + 1) - math.lgamma(k + l + 2))
        assert math.exp(selberg_log_z(1, k, l)) == pytest.approx(beta, rel=1e-12)


def test_selberg_rejects_bad_input():
    with pytest.raises(ParameterError):
        selberg_log_z(0, 0, 0)
    with pytest.raises(ParameterError):
        selberg_log_z(2, -1, 0)


@pytest.mark.parametrize(
    "args,expected",
    [((10, 3, 4), (7, 0, 3, 1, 3)), ((10, 6, 7), (4, 3, 3, 1, 3)), ((8, 4, 4), (4, 0, 4, 0, 0))],
)
def test_spectrum_params_examples(args, expected):
    p = spectrum_params(*args)
    assert (p.n0, p.n1, p.n, p.kappaN, p.lambdaN) == expected


@given(st.integers(1, 40).flatmap(lambda N: st.tuples(st.just(N), st.integers(0, N), st.integers(0, N))))
def test_spectrum_params_bookkeeping(args):
    N, k, l = args  # noqa: E741
    p = spectrum_params(N, k, l)
    assert p.n0 + p.n1 + p.n == N
    assert p.kappaN == abs(k - l) and p.lambdaN == abs(k + l - N)
    assert p.n >= 0


def test_spectrum_params_rejects_bad_ranks():
    with pytest.raises(ParameterError):
        spectrum_params(4, 5, 1)
    with pytest.raises(ParameterError):
        spectrum_params(0, 0, 0)


def test_sample_pair_small_example():
    pair = sample_pair(4, 2, 2, RngStream(1))
    assert np.trace(pair.P).real == 2.0
    assert abs(np.trace(pair.Q).real - 2.0) <= 1e-12
    assert np.allclose(hermitian_eigs(pair.Q), [0, 0, 1, 1], atol=1e-12)


def test_sample_pair_rank_zero():
    pair = sample_pair(5, 0, 3, RngStream(1))
    assert np.all(pair.P == 0)
    assert np.all(pair.P @ pair.Q @ pair.P == 0)


def test_sample_pair_trace_mean():
    N, k, l, S = 8, 3, 4, 10_000  # noqa: E741
    pairs = (sample_pair(N, k, l, RngStream(5, i)) for i in range(S))
    v = np.array([np.trace(p.P @ p.Q).real / N for p in pairs])
    se = v.std(ddof=1) / math.sqrt(S)
    assert abs(v.mean() - k * l / N**2) <= 3 * se


@given(
    st.integers(1, 12).flatmap(lambda N: st.tuples(st.just(N), st.integers(0, N), st.integers(0, N))),
    st.integers(0, 2**32),
)
def test_pairs_are_projections_with_ranks(args, seed):
    N, k, l = args  # noqa: E741
    for pair in (sample_pair(N, k, l, RngStream(seed)), canonical_pair(N, k, l, RngStream(seed))):
        assert is_projection(pair.P, 1e-10) and is_projection(pair.Q, 1e-10)
        assert abs(np.trace(pair.P).real - k) <= 1e-8
        assert abs(np.trace(pair.Q).real - l) <= 1e-8


@given(
    st.integers(1, 14).flatmap(lambda N: st.tuples(st.just(N), st.integers(0, N), st.integers(0, N))),
    st.integers(0, 2**32),
)
def test_pqp_forced_eigenvalues(args, seed):
    N, k, l = args  # noqa: E741
    pair = sample_pair(N, k, l, RngStream(seed))
    w = hermitian_eigs(pair.P @ pair.Q @ pair.P)
    p = spectrum_params(N, k, l)
    assert np.all(w >= -1e-10) and np.all(w <= 1 + 1e-10)
    assert np.sum(np.abs(w) <= ATOM_TOL) >= p.n0
    assert np.sum(np.abs(w - 1) <= ATOM_TOL) >= p.n1


def test_sample_jacobi_range_and_sorting():
    for n, s, t in [(1, 0, 0), (4, 2, 3), (7, 0, 5)]:
        x = sample_jacobi(n, s, t, RngStream(n))
        assert x.shape == (n,)
        assert np.all(np.diff(x) >= 0)
        assert np.all(x >= -1e-10) and np.all(x <= 1 + 1e-10)


def test_sample_jacobi_rejects_bad_exponents():
    with pytest.raises(ParameterError):
        sample_jacobi(0, 0, 0, 1)
    with pytest.raises(ParameterError):
        sample_jacobi(2, 0.5, 0, 1)
    with pytest.raises(ParameterError):
        sample_jacobi(2, -1, 0, 1)


@pytest.mark.parametrize("s,t,mean", [(0, 0, 0.5), (2, 1, 0.6)])
def test_sample_jacobi_one_dimensional_is_beta(s, t, mean):
    S = 10_000
    v = np.array([sample_jacobi(1, s, t, RngStream(17, i))[0] for i in range(S)])
    se = v.std(ddof=1) / math.sqrt(S)
    assert abs(v.mean() - mean) <= 3 * se


def test_beta_mean_oracle_by_quadrature():
    # independent check of the 3/5 used above: int x * x^2 (1 - x) / int x^2 (1 - x)
    from scipy.integrate import quad

    num = quad(lambda x: x**3 * (1 - x), 0, 1)[0]
    den = quad(lambda x: x**2 * (1 - x), 0, 1)[0]
    assert num / den == pytest.approx(0.6, abs=1e-12)


def test_jacobi_matches_pqp_nonzero_spectrum():
    N, k, l, S = 8, 2, 3, 10_000  # noqa: E741
    a = np.empty((S, 4))
    b = np.empty((S, 4))
    for i in range(S):
        pair = sample_pair(N, k, l, RngStream(31, i))
        w = np.sort(hermitian_eigs(pair.P @ pair.Q @ pair.P))[-k:]
        x = sample_jacobi(k, l - k, N - k - l, RngStream(32, i))
        for m in range(4):
            a[i, m] = np.sum(w ** (m + 1))
            b[i, m] = np.sum(x ** (m + 1))
    se = np.sqrt(a.var(axis=0, ddof=1) / S + b.var(axis=0, ddof=1) / S)
    assert np.all(np.abs(a.mean(axis=0) - b.mean(axis=0)) <= 3 * se)


def test_canonical_two_by_two_has_uniform_angle():
    S = 10_000
    x = np.empty(S)
    for i in range(S):
        pair = canonical_pair(2, 1, 1, RngStream(8, i))
        Q = pair.Q
        t = Q[0, 0].real
        assert abs(Q[0, 1] - math.sqrt(t * (1 - t))) <= 1e-12
        assert abs(Q[1, 1] - (1 - t)) <= 1e-12
        x[i] = t
    # uniform on [0, 1]: mean 1/2, variance 1/12
    assert abs(x.mean() - 0.5) <= 3 * math.sqrt(1 / 12 / S)
    assert abs(np.mean(x**2) - 1 / 3) <= 3 * math.sqrt((1 / 5 - 1 / 9) / S)


def test_canonical_swaps_when_k_exceeds_l():
    pair = canonical_pair(9, 6, 2, RngStream(1))
    assert (pair.k, pair.l) == (6, 2)
    assert abs(np.trace(pair.P).real - 6) <= 1e-10
    assert abs(np.trace(pair.Q).real - 2) <= 1e-10


def test_two_by_two_generators():
    pair = two_by_two_pair(0.3)
    assert is_projection(pair.P) and is_projection(pair.Q)
    assert np.allclose(pair.P @ pair.Q @ pair.P, 0.3 * pair.P)
