"""Rate functionals for spectra and tracial states of projection pairs.

Values live in the extended reals, represented by IEEE floats: ``math.inf``
marks "outside the effective domain" and ``-math.inf`` an infinite
logarithmic energy.  Every formula below is arranged so that the only
infinities that reach an addition have the same sign.

Integrals against the continuous part ``mu`` use its equal-weight cloud.
The logarithmic energy uses the off-diagonal pair average, which converges
like ``O(log n / n)`` for quantile clouds.
"""

import math
import warnings
from dataclasses import dataclass

import numpy as np
from scipy.special import xlogy

from . import tolerances as tol
from .errors import ParameterError, UnsupportedFunctionError
from .spectra import CatalogFunction, SpectralMeasure, Tag
from .tracial import freeness_atoms, generator_traces

__all__ = [
    "b_function",
    "RateParams",
    "rate_params",
    "log_energy",
    "rate_tilde",
    "rate_ts",
    "free_entropy",
    "rate_contracted",
]

INF = math.inf
_CHUNK = 512


def b_function(s, t):
    """Limit of ``N^-2 log Z`` for the Jacobi normalization, per unit ``rho^2``.

    ``x^2/2 log x`` terms are continued by 0 at ``x = 0``.
    """
    if s < 0 or t < 0:
        raise ParameterError(f"b_function needs s, t >= 0, got ({s}, {t})")

    def q(x):
        return 0.5 * xlogy(x * x, x)

    return float(q(1 + s) - q(s) + q(1 + t) - q(t) - q(2 + s + t) + q(1 + s + t))


@dataclass(frozen=True)
class RateParams:
    alpha: float
    beta: float
    rho: float
    kappa: float
    lam: float
    C: float

    @property
    def max_weight(self):
        """``max(alpha, beta, 1 - alpha, 1 - beta)``, which equals ``rho + kappa + lam``."""
        return max(self.alpha, self.beta, 1 - self.alpha, 1 - self.beta)


def rate_params(alpha, beta):
    """``rho``, ``kappa = |alpha - beta|``, ``lam = |alpha + beta - 1|`` and the constant ``C``."""
    if not (0.0 <= alpha <= 1.0 and 0.0 <= beta <= 1.0):
        raise ParameterError(f"alpha and beta must lie in [0, 1], got ({alpha}, {beta})")
    rho = min(alpha, beta, 1.0 - alpha, 1.0 - beta)
    kappa = abs(alpha - beta)
    lam = abs(alpha + beta - 1.0)
    return RateParams(alpha, beta, rho, kappa, lam, _scaled_b(rho, kappa, lam))


def _scaled_b(rho, kappa, lam):
    """``rho^2 B(kappa / rho, lam / rho)`` without dividing by ``rho``.

    ``x^2 log x`` is homogeneous up to a ``log rho`` term whose coefficients
    sum to ``-rho^2``, so the quotients never have to be formed; this stays
    finite as ``rho -> 0`` and tends to the value 0 used at ``rho = 0``.
    """
    if rho <= 0.0:
        return 0.0

    def q(x):
        return 0.5 * xlogy(x * x, x)

    total = (
        q(rho + kappa) - q(kappa) + q(rho + lam) - q(lam)
        - q(2 * rho + kappa + lam) + q(rho + kappa + lam)
    )
    return float(total + 0.5 * xlogy(rho * rho, rho))


def _pair_log_mean(x):
    """``(1/(n(n-1))) sum_{i != j} log|x_i - x_j|`` in fixed row-block order."""
    x = np.asarray(x, float)
    n = x.size
    total = 0.0
    with np.errstate(divide="ignore"):
        for start in range(0, n, _CHUNK):
            block = x[start : start + _CHUNK]
            d = np.abs(block[:, None] - x[None, :])
            rows = np.arange(block.size)
            d[rows, start + rows] = 1.0  # log 1 = 0 removes the diagonal
            total += float(np.sum(np.log(d)))
    return total / (n * (n - 1))


def log_energy(mu):
    """Logarithmic energy ``int int log|x - y| dmu dmu`` of a spectral measure.

    Any atom of positive mass gives ``-inf``.  A cloud is treated as the
    equal-weight discretization of an atom-free measure, and a cloud with
    coincident points gives ``-inf`` with a :class:`RuntimeWarning`.
    """
    if any(m > 0 for _, m in mu.atoms):
        return -INF
    n = mu.cloud.size
    if n == 0:
        raise ParameterError("log_energy of the zero measure")
    if n == 1:
        return -INF
    val = _pair_log_mean(mu.cloud)
    if val == -INF:
        warnings.warn("cloud has coincident points; log energy is -inf", RuntimeWarning, stacklevel=2)
        return -INF
    return val * mu.cloud_mass**2


def _jacobi_functional(t, p):
    """``-rho^2 Sigma(mu) - rho kappa int log t - rho lam int log(1-t) + C`` for a cloud ``t``."""
    t = np.asarray(t, float)
    if np.any(t <= tol.EDGE_TOL) or np.any(t >= 1.0 - tol.EDGE_TOL):
        return INF
    sigma = log_energy(SpectralMeasure([], t, 1.0)) if t.size > 1 else -INF
    if sigma == -INF:
        return INF
    return float(
        -p.rho**2 * sigma
        - p.rho * p.kappa * np.mean(np.log(t))
        - p.rho * p.lam * np.mean(np.log1p(-t))
        + p.C
    )


def _atoms_match(measure, required):
    """True when the atoms of ``measure`` are exactly ``required`` (location -> mass) within tolerance."""
    req = {}
    for loc, m in required:
        key = next((k for k in req if abs(k - loc) <= tol.ATOM_MERGE_TOL), loc)
        req[key] = req.get(key, 0.0) + m
    for loc, m in req.items():
        if abs(measure.atom_at(loc) - m) > tol.MASS_TOL:
            return False
    for loc, m in measure.atoms:
        near = any(abs(loc - k) <= tol.ATOM_MERGE_TOL for k in req)
        if not near and m > tol.MASS_TOL:
            return False
    return True


def _shape_ok(measure, required, cloud_mass):
    if not _atoms_match(measure, required):
        return False
    if abs(measure.cloud_mass - cloud_mass) > tol.MASS_TOL:
        return False
    return cloud_mass <= tol.MASS_TOL or measure.cloud.size > 0


def rate_tilde(mu_tilde, alpha, beta):
    """Rate of the empirical ``PQP`` spectrum at ``mu_tilde``.

    Finite only when ``mu_tilde`` has mass ``1 - min(alpha, beta)`` at 0,
    ``max(alpha + beta - 1, 0)`` at 1, no other atoms, and a continuous part
    of mass ``rho`` strictly inside ``(0, 1)``.
    """
    p = rate_params(alpha, beta)
    required = [(0.0, 1.0 - min(alpha, beta)), (1.0, max(alpha + beta - 1.0, 0.0))]
    if not _shape_ok(mu_tilde, required, p.rho):
        return INF
    if p.rho <= 0.0:
        return 0.0
    return _jacobi_functional(mu_tilde.cloud, p)


def rate_ts(tau, alpha, beta):
    """Rate on tracial states: finite only on states with the free corner weights."""
    target = freeness_atoms(alpha, beta)
    if any(abs(x - y) > tol.MASS_TOL for x, y in zip(tau.alphas, target)):
        return INF
    ta, tb = generator_traces(tau)
    if abs(ta - alpha) > tol.MASS_TOL or abs(tb - beta) > tol.MASS_TOL:
        return INF
    p = rate_params(alpha, beta)
    if p.rho <= 0.0:
        return 0.0
    return _jacobi_functional(tau.mu.cloud, p)


def free_entropy(tau):
    """Free entropy of the pair generating ``tau``; ``<= 0`` with equality iff free."""
    alpha, beta = generator_traces(tau)
    alpha = min(max(alpha, 0.0), 1.0)
    beta = min(max(beta, 0.0), 1.0)
    return -rate_ts(tau, alpha, beta)


def _symmetric(cloud, center):
    x = np.sort(cloud)
    return bool(np.all(np.abs(x + x[::-1] - 2.0 * center) <= tol.CLOUD_MATCH_TOL))


def _anticommutator_rate(measure, p):
    a, b = p.alpha, p.beta
    required = [
        (0.0, max(abs(a - b), 1.0 - 2.0 * a, 1.0 - 2.0 * b)),
        (2.0, max(a + b - 1.0, 0.0)),
    ]
    if not _shape_ok(measure, required, 2.0 * p.rho):
        return INF
    if p.rho <= 0.0:
        return 0.0
    y = measure.cloud
    pos, neg = np.sort(y[y > 0]), np.sort(y[y < 0])
    if pos.size != neg.size or np.any(pos >= 2.0) or np.any(neg < -0.25 - tol.CLOUD_MATCH_TOL):
        return INF
    r = 0.5 * (np.sqrt(1.0 + 4.0 * pos) - 1.0)
    t = r * r
    if np.any(np.abs(np.sort(t - r) - neg) > tol.CLOUD_MATCH_TOL):
        return INF
    return _jacobi_functional(t, p)


def _linear_rate(measure, a, b, p):
    alpha, beta = p.alpha, p.beta
    s = a + b
    required = [
        (0.0, max(1.0 - alpha - beta, 0.0)),
        (a, max(alpha - beta, 0.0)),
        (b, max(beta - alpha, 0.0)),
        (s, max(alpha + beta - 1.0, 0.0)),
    ]
    if not _shape_ok(measure, required, 2.0 * p.rho):
        return INF
    if p.rho <= 0.0:
        return 0.0
    x = measure.cloud
    A, B = sorted([0.0, a, b, s])[:2]
    margin = tol.EDGE_TOL * max(1.0, abs(a), abs(b))
    lower = (x > A + margin) & (x < B - margin)
    upper = (x > s - B + margin) & (x < s - A - margin)
    if not np.all(lower | upper) or not _symmetric(x, 0.5 * s):
        return INF
    sigma = log_energy(SpectralMeasure([], x, 1.0))
    if sigma == -INF:
        return INF
    return float(
        -2.0 * p.rho**2 * sigma
        - p.rho * p.kappa * np.mean(np.log(np.abs((x - a) * (x - b))))
        - p.rho * p.lam * np.mean(np.log(np.abs(x * (s - x))))
        + p.C
        + p.rho * p.max_weight * math.log(abs(a * b))
    )


def _unitary_rate(measure, p):
    alpha, beta = p.alpha, p.beta
    required = [(0.0, abs(alpha + beta - 1.0)), (math.pi, abs(alpha - beta))]
    # an angle just above -pi is the same point as pi
    theta = np.where(measure.cloud <= -math.pi + tol.ATOM_MERGE_TOL, math.pi, measure.cloud)
    shifted = SpectralMeasure(measure.atoms, theta, measure.cloud_mass)
    if not _shape_ok(shifted, required, 2.0 * p.rho):
        return INF
    if p.rho <= 0.0:
        return 0.0
    if np.any(np.abs(theta) <= tol.EDGE_TOL) or np.any(np.abs(theta) >= math.pi - tol.EDGE_TOL):
        return INF
    if not _symmetric(theta, 0.0):
        return INF
    # nu is symmetric, so its cosine image is carried by the upper half alone
    c = np.cos(theta[theta > 0])
    sigma = log_energy(SpectralMeasure([], c, 1.0)) if c.size > 1 else -INF
    if sigma == -INF:
        return INF
    return float(
        -p.rho**2 * sigma
        - p.rho * p.kappa * np.mean(np.log1p(c))
        - p.rho * p.lam * np.mean(np.log1p(-c))
        + p.C
        + p.rho * p.max_weight * math.log(2.0)
    )


def rate_contracted(measure, h, alpha, beta):
    """Rate of the empirical spectrum of ``h(P, Q)`` at ``measure``.

    Parameters
    ----------
    measure : SpectralMeasure
        On the real line, or on angles in ``(-pi, pi]`` for the unitary.
    h : CatalogFunction
    alpha, beta : float
        Limiting rank ratios.

    Returns
    -------
    float
        ``inf`` when ``measure`` is not of the form produced by a state
        with the free corner weights.
    """
    if not isinstance(h, CatalogFunction):
        raise UnsupportedFunctionError(f"no contracted rate for {h!r}")
    p = rate_params(alpha, beta)
    if h.tag is Tag.PQP:
        return rate_tilde(measure, alpha, beta)
    if h.tag is Tag.ANTICOMMUTATOR:
        return _anticommutator_rate(measure, p)
    if h.tag is Tag.LINEAR:
        return _linear_rate(measure, h.a, h.b, p)
    if h.tag is Tag.UNITARY_PRODUCT:
        return _unitary_rate(measure, p)
    raise UnsupportedFunctionError(f"no contracted rate for {h}")  # pragma: no cover
