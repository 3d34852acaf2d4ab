"""Dense complex linear algebra used throughout the package.

Matrices are plain ``complex128`` :class:`numpy.ndarray` objects.  The
structural predicates below decide hermiticity, unitarity and the projection
property by Frobenius residuals.
"""

import numpy as np

from . import tolerances as tol
from .errors import DimensionError, NumericError, ShapeError
from .rng import as_generator

__all__ = [
    "ginibre",
    "haar_unitary",
    "hermitian_eigs",
    "inv_sqrt_psd",
    "is_hermitian",
    "is_unitary",
    "is_projection",
    "diag_projection",
]


def _square(M):
    M = np.asarray(M)
    if M.ndim != 2 or M.shape[0] != M.shape[1]:
        raise ShapeError(f"expected a square matrix, got shape {M.shape}")
    return M


def is_hermitian(M, atol=tol.STRUCTURE_TOL):
    M = _square(M)
    return np.linalg.norm(M - M.conj().T) <= atol


def is_unitary(M, atol=tol.STRUCTURE_TOL):
    M = _square(M)
    eye = np.eye(M.shape[0])
    return np.linalg.norm(M.conj().T @ M - eye) <= atol


def is_projection(M, atol=tol.STRUCTURE_TOL):
    """``M = M*`` and ``M^2 = M`` up to ``atol`` in Frobenius norm."""
    M = _square(M)
    return is_hermitian(M, atol) and np.linalg.norm(M @ M - M) <= atol


def diag_projection(N, k):
    """The rank-``k`` coordinate projection ``I_k + 0_{N-k}``."""
    d = np.zeros(N, dtype=complex)
    d[:k] = 1.0
    return np.diag(d)


def ginibre(rows, cols, rng):
    """Complex Gaussian matrix, real and imaginary parts i.i.d. N(0, 1)."""
    g = as_generator(rng)
    return g.standard_normal((rows, cols)) + 1j * g.standard_normal((rows, cols))


def haar_unitary(N, rng):
    """Haar-distributed random unitary of size ``N``.

    A Ginibre matrix is factored as ``Z = QR`` and the columns of ``Q`` are
    rescaled by the phases of ``diag(R)``.  This makes the triangular factor
    have positive diagonal, which fixes the decomposition uniquely and is
    what makes the result exactly Haar rather than merely unitary.

    Parameters
    ----------
    N : int
        Matrix size, ``N >= 1``.
    rng : RngStream, numpy.random.Generator or int
        Source of randomness.

    Returns
    -------
    U : (N, N) complex ndarray
    """
    if N < 1:
        raise DimensionError(f"haar_unitary needs N >= 1, got {N}")
    Z = ginibre(N, N, rng)
    Q, R = np.linalg.qr(Z)
    d = np.diagonal(R)
    phases = d / np.abs(d)
    return Q * phases[np.newaxis, :]


def hermitian_eigs(M, want_vectors=False):
    """Ascending eigenvalues (and optionally eigenvectors) of a Hermitian matrix.

    Raises
    ------
    ShapeError
        If ``M`` is not Hermitian to :data:`~twoproj.tolerances.STRUCTURE_TOL`
        (relative to ``max(1, ||M||_F)``).
    NumericError
        If LAPACK fails to converge or the reconstruction residual exceeds
        :data:`~twoproj.tolerances.EIG_RECON_TOL`.
    """
    M = _square(M)
    scale = max(1.0, np.linalg.norm(M))
    if not is_hermitian(M, tol.STRUCTURE_TOL * scale):
        raise ShapeError("hermitian_eigs requires a Hermitian matrix")
    H = 0.5 * (M + M.conj().T)
    try:
        if not want_vectors:
            return np.linalg.eigvalsh(H)
        w, V = np.linalg.eigh(H)
    except np.linalg.LinAlgError as exc:
        raise NumericError(f"Hermitian eigensolver did not converge: {exc}") from exc
    resid = np.linalg.norm(H - (V * w) @ V.conj().T)
    if resid > tol.EIG_RECON_TOL * max(np.linalg.norm(H), np.finfo(float).tiny):
        raise NumericError("eigendecomposition residual too large", residual=resid)
    return w, V


def inv_sqrt_psd(M):
    """``M^{-1/2}`` for a Hermitian positive definite matrix.

    Raises :class:`NumericError` when the smallest eigenvalue is not above
    ``dim * 1e-12 * ||M||``.
    """
    w, V = hermitian_eigs(M, want_vectors=True)
    n = w.shape[0]
    floor = n * tol.PD_FLOOR * np.linalg.norm(M, 2)
    if w[0] <= floor:
        raise NumericError(
            f"matrix is singular or indefinite (min eigenvalue {w[0]:.3e})", residual=w[0]
        )
    return (V / np.sqrt(w)) @ V.conj().T
