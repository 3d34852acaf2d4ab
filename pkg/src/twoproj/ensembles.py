"""Samplers for random projection pairs and Jacobi ensembles.

Two routes produce a pair ``(P, Q)`` of independent unitarily invariant
projections of ranks ``(k, l)``:

* :func:`sample_pair` fixes ``P = I_k + 0`` and conjugates ``I_l + 0`` by a
  Haar unitary;
* :func:`canonical_pair` builds the block form given by the structure theorem
  for two projections, with the angles drawn from a Jacobi ensemble.

Both realize the same joint distribution, which the ``STRUCTURE`` suite in
:mod:`twoproj.harness` checks through mixed moments.
"""

from dataclasses import dataclass

import numpy as np
from scipy.special import gammaln

from .errors import ParameterError
from .linalg import diag_projection, ginibre, haar_unitary, hermitian_eigs, inv_sqrt_psd
from .rng import as_generator

__all__ = [
    "ProjectionPair",
    "SpectrumParams",
    "sample_pair",
    "sample_jacobi",
    "canonical_pair",
    "spectrum_params",
    "selberg_log_z",
    "two_by_two_pair",
]


@dataclass(frozen=True)
class ProjectionPair:
    """A pair of ``N x N`` orthogonal projections of ranks ``k`` and ``l``."""

    N: int
    k: int
    l: int  # noqa: E741
    P: np.ndarray
    Q: np.ndarray


@dataclass(frozen=True)
class SpectrumParams:
    """Eigenvalue bookkeeping for ``PQP``.

    ``n0`` forced zeros, ``n1`` forced ones, ``n`` Jacobi-distributed values
    with exponents ``kappaN = |k - l|`` and ``lambdaN = |k + l - N|``.
    """

    n0: int
    n1: int
    n: int
    kappaN: int
    lambdaN: int


def _check_ranks(N, k, l):  # noqa: E741
    if N < 1:
        raise ParameterError(f"N must be positive, got {N}")
    if not (0 <= k <= N and 0 <= l <= N):
        raise ParameterError(f"ranks must lie in [0, N]: N={N}, k={k}, l={l}")


def spectrum_params(N, k, l):  # noqa: E741
    _check_ranks(N, k, l)
    n0 = N - min(k, l)
    n1 = max(k + l - N, 0)
    return SpectrumParams(n0, n1, N - n0 - n1, abs(k - l), abs(k + l - N))


def sample_pair(N, k, l, rng):  # noqa: E741
    """Haar route: ``P = I_k + 0``, ``Q = U (I_l + 0) U*`` with ``U`` Haar."""
    _check_ranks(N, k, l)
    P = diag_projection(N, k)
    U = haar_unitary(N, rng)
    V = U[:, :l]
    Q = V @ V.conj().T
    Q = 0.5 * (Q + Q.conj().T)
    return ProjectionPair(N, k, l, P, Q)


def sample_jacobi(n, s, t, rng):
    """Eigenvalues of an ``n x n`` Jacobi ensemble with exponents ``(s, t)``.

    Built as ``(A+B)^{-1/2} A (A+B)^{-1/2}`` from independent complex
    Wisharts with ``n+s`` and ``n+t`` degrees of freedom, so the joint
    eigenvalue density is proportional to
    ``prod x_i^s (1-x_i)^t prod_{i<j} (x_i - x_j)^2`` on ``[0, 1]^n``.

    Returns
    -------
    ndarray
        Sorted eigenvalues, clipped into ``[0, 1]``.
    """
    if n < 1:
        raise ParameterError(f"Jacobi size must be >= 1, got {n}")
    if s < 0 or t < 0 or int(s) != s or int(t) != t:
        raise ParameterError(f"Jacobi exponents must be non-negative integers, got ({s}, {t})")
    g = as_generator(rng)
    Y = ginibre(n, n + int(s), g)
    Z = ginibre(n, n + int(t), g)
    A = Y @ Y.conj().T
    B = Z @ Z.conj().T
    S = inv_sqrt_psd(A + B)
    X = S @ A @ S
    X = 0.5 * (X + X.conj().T)
    return np.clip(hermitian_eigs(X), 0.0, 1.0)


def _block_q(x):
    """``[[X, sqrt(X(I-X))], [sqrt(X(I-X)), I-X]]`` for ``X = diag(x)``."""
    m = x.shape[0]
    off = np.sqrt(x * (1.0 - x))
    Q = np.zeros((2 * m, 2 * m), dtype=complex)
    idx = np.arange(m)
    Q[idx, idx] = x
    Q[idx, idx + m] = off
    Q[idx + m, idx] = off
    Q[idx + m, idx + m] = 1.0 - x
    return Q


def _canonical_ordered(N, k, l, g):  # noqa: E741
    """Block form for ``k <= l``."""
    P = diag_projection(N, k)
    Q = np.zeros((N, N), dtype=complex)
    if k + l <= N:
        # X (k x k) block pairs P's range with the next k coordinates
        if k > 0:
            x = sample_jacobi(k, l - k, N - k - l, g)
            Q[: 2 * k, : 2 * k] = _block_q(x)
        Q[2 * k : k + l, 2 * k : k + l] = np.eye(l - k)
    else:
        m = N - l
        ones = k + l - N
        Q[:ones, :ones] = np.eye(ones)
        if m > 0:
            x = sample_jacobi(m, l - k, k + l - N, g)
            Q[ones : ones + 2 * m, ones : ones + 2 * m] = _block_q(x)
        Q[ones + 2 * m :, ones + 2 * m :] = np.eye(l - k)
    return P, Q


def canonical_pair(N, k, l, rng):  # noqa: E741
    """Structure-theorem route to a pair with the same joint law as :func:`sample_pair`.

    For ``k + l <= N`` the angle block has size ``k`` and Jacobi exponents
    ``(l - k, N - k - l)``; otherwise size ``N - l`` and exponents
    ``(l - k, k + l - N)``.  When ``k > l`` the roles are swapped for the
    construction and swapped back in the output.
    """
    _check_ranks(N, k, l)
    g = as_generator(rng)
    if k <= l:
        P, Q = _canonical_ordered(N, k, l, g)
    else:
        Q, P = _canonical_ordered(N, l, k, g)
    return ProjectionPair(N, k, l, P, Q)


def two_by_two_pair(t):
    """The generators ``e(t), f(t)`` of the universal two-projection algebra as 2x2 matrices."""
    off = np.sqrt(t * (1.0 - t))
    P = np.array([[1.0, 0.0], [0.0, 0.0]], dtype=complex)
    Q = np.array([[t, off], [off, 1.0 - t]], dtype=complex)
    return ProjectionPair(2, 1, 1, P, Q)


def selberg_log_z(n, kappa, lam):
    r"""Log of the Jacobi normalization constant via the Selberg integral.

    .. math::

        Z = \int_{[0,1]^n} \prod_i x_i^\kappa (1-x_i)^\lambda
            \prod_{i<j} (x_i - x_j)^2 \, dx
          = \prod_{j=1}^{n} \frac{\Gamma(j+1)\Gamma(j+\kappa)\Gamma(j+\lambda)}
                                 {\Gamma(2)\Gamma(j+n+\kappa+\lambda)}
    """
    if n < 1:
        raise ParameterError(f"n must be >= 1, got {n}")
    if kappa < 0 or lam < 0:
        raise ParameterError("kappa and lambda must be non-negative")
    j = np.arange(1, n + 1, dtype=float)
    terms = (
        gammaln(j + 1)
        + gammaln(j + kappa)
        + gammaln(j + lam)
        - gammaln(2.0)
        - gammaln(j + n + kappa + lam)
    )
    return float(np.sum(terms))
