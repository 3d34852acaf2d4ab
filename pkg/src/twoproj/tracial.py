"""Tracial states on the universal C*-algebra generated by two projections.

A tracial state is parameterized by four corner weights and a probability
measure ``mu`` on ``(0, 1)``::

    tau(a) = a10 a_1(0) + a01 a_2(0) + a11 a_1(1) + a00 a_2(1)
             + (1 - sum alpha) int tr(a(t)) dmu(t)

where ``tr`` is the normalized trace on 2x2 matrices and the generators are
``e(t) = [[1, 0], [0, 0]]`` and ``f(t) = [[t, s], [s, 1 - t]]`` with
``s = sqrt(t (1 - t))``.  The weight ``a11`` is the trace of ``p ^ q``,
``a10`` of ``p ^ q'``, ``a01`` of ``p' ^ q`` and ``a00`` of ``p' ^ q'``.
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import tolerances as tol
from .errors import ExtractionError, ParameterError, UnsupportedFunctionError
from .linalg import hermitian_eigs
from .spectra import CatalogFunction, SpectralMeasure, Tag

__all__ = [
    "TracialState",
    "from_pair",
    "generator_traces",
    "psi_map",
    "freeness_atoms",
    "free_state",
    "pushforward",
    "anticommutator_branches",
    "linear_branches",
    "unitary_angle",
]


@dataclass
class TracialState:
    """``(a11, a10, a01, a00, mu)`` with ``mu`` an atom-free measure on ``(0, 1)``."""

    a11: float
    a10: float
    a01: float
    a00: float
    mu: SpectralMeasure = field(default_factory=SpectralMeasure)

    def __post_init__(self):
        alphas = self.alphas
        if min(alphas) < -tol.MASS_TOL or max(alphas) > 1 + tol.MASS_TOL:
            raise ParameterError(f"corner weights must lie in [0, 1], got {alphas}")
        if sum(alphas) > 1 + tol.MASS_TOL:
            raise ParameterError(f"corner weights sum to {sum(alphas)} > 1")
        if self.mu.atoms:
            raise ParameterError("mu must be atom-free")
        if self.rho > tol.MASS_TOL and self.mu.cloud.size == 0:
            raise ParameterError("a state with continuous weight needs a nonempty mu")

    @property
    def alphas(self):
        return (self.a11, self.a10, self.a01, self.a00)

    @property
    def rho(self):
        """Half of the weight not carried by the corners; lies in ``[0, 1/2]``."""
        return max(0.0, 0.5 * (1.0 - sum(self.alphas)))

    def mix(self, other, c):
        """The state ``c * self + (1 - c) * other``.

        Corner weights mix linearly; ``mu`` mixes with weights proportional
        to ``c * rho`` and ``(1 - c) * rho'`` so that the continuous part
        ``rho * mu`` is affine as well.
        """
        alphas = [c * x + (1 - c) * y for x, y in zip(self.alphas, other.alphas)]
        w1, w2 = c * self.rho, (1 - c) * other.rho
        if w1 + w2 <= 0.0:
            mu = SpectralMeasure()
        elif w2 <= 0.0:
            mu = self.mu
        elif w1 <= 0.0:
            mu = other.mu
        else:
            mu = self.mu.mix(other.mu, w1 / (w1 + w2))
        return TracialState(*alphas, mu=mu)

    def to_dict(self):
        return {
            "a11": self.a11,
            "a10": self.a10,
            "a01": self.a01,
            "a00": self.a00,
            "mu": self.mu.to_dict(),
        }

    @classmethod
    def from_dict(cls, d):
        mu = SpectralMeasure.from_dict(d.get("mu", {}))
        return cls(d["a11"], d["a10"], d["a01"], d["a00"], mu=mu)

    def to_json(self):
        return json.dumps(self.to_dict())

    @classmethod
    def from_json(cls, text):
        return cls.from_dict(json.loads(text))


def _count_ones(M, atol):
    w = hermitian_eigs(M)
    return int(np.sum(np.abs(w - 1.0) <= atol)), w


def from_pair(pair, atol=tol.ATOM_TOL):
    """Tracial state ``h -> tr_N(h(P, Q))`` of a matrix pair.

    Corner weights are read off as the multiplicity of the eigenvalue 1 of
    ``PQP``, ``P(I-Q)P``, ``(I-P)Q(I-P)`` and ``(I-P)(I-Q)(I-P)``; ``mu`` is
    the cloud of ``PQP`` eigenvalues in ``(atol, 1 - atol)``.

    Raises
    ------
    ExtractionError
        If twice the interior count differs from the dimension left over by
        the corners.
    """
    N = pair.N
    P, Q = pair.P, pair.Q
    eye = np.eye(N)
    Pc, Qc = eye - P, eye - Q
    n11, w = _count_ones(P @ Q @ P, atol)
    n10, _ = _count_ones(P @ Qc @ P, atol)
    n01, _ = _count_ones(Pc @ Q @ Pc, atol)
    n00, _ = _count_ones(Pc @ Qc @ Pc, atol)
    interior = w[(w > atol) & (w < 1.0 - atol)]
    expected = N - (n11 + n10 + n01 + n00)
    if 2 * interior.size != expected:
        raise ExtractionError(
            f"interior PQP count {interior.size} inconsistent with corner counts "
            f"(expected {expected} / 2)",
            interior_count=interior.size,
            expected_count=expected,
        )
    mu = SpectralMeasure([], interior, 1.0 if interior.size else 0.0)
    return TracialState(n11 / N, n10 / N, n01 / N, n00 / N, mu=mu)


def generator_traces(tau):
    """``(tau(e), tau(f))``."""
    a11, a10, a01, a00 = tau.alphas
    return 0.5 * (1 + a11 + a10 - a01 - a00), 0.5 * (1 + a11 - a10 + a01 - a00)


def _continuous(tau, fn, weight):
    """Cloud of ``fn(mu)`` carrying ``weight`` (empty when there is nothing to carry)."""
    if weight <= 0.0 or tau.mu.cloud.size == 0:
        return np.empty(0), 0.0
    return fn(tau.mu.cloud), weight


def psi_map(tau):
    """``(tau(e), tau(f), distribution of efe)``."""
    alpha, beta = generator_traces(tau)
    a11, a10, a01, a00 = tau.alphas
    rho = tau.rho
    atoms = [(0.0, 0.5 * (1 - a11 + a10 + a01 + a00)), (1.0, a11)]
    cloud, mass = _continuous(tau, lambda t: t, rho)
    return alpha, beta, SpectralMeasure(atoms, cloud, mass).canonical()


def freeness_atoms(alpha, beta):
    """Corner weights ``(a11, a10, a01, a00)`` of a free pair with traces ``(alpha, beta)``."""
    return (
        max(alpha + beta - 1.0, 0.0),
        max(alpha - beta, 0.0),
        max(beta - alpha, 0.0),
        max(1.0 - alpha - beta, 0.0),
    )


def free_state(alpha, beta, n=tol.DEFAULT_CLOUD_SIZE):
    """The state of a free pair, with ``mu`` discretized by an ``n``-point quantile cloud."""
    from .limits import minimizer_pqp, quantile_cloud

    atoms = freeness_atoms(alpha, beta)
    if sum(atoms) >= 1.0 - tol.MASS_TOL:
        return TracialState(*atoms)
    law = quantile_cloud(minimizer_pqp(alpha, beta), n)
    return TracialState(*atoms, mu=SpectralMeasure([], law.cloud, 1.0))


def anticommutator_branches(t):
    """Eigenvalues ``t + sqrt(t)`` and ``t - sqrt(t)`` of ``ef + fe`` at parameter ``t``."""
    r = np.sqrt(t)
    return t + r, t - r


def linear_branches(t, a, b):
    """Eigenvalues ``(a + b -+ sqrt((a - b)^2 + 4abt)) / 2`` of ``ae + bf``."""
    r = np.sqrt((a - b) ** 2 + 4.0 * a * b * t)
    return 0.5 * (a + b - r), 0.5 * (a + b + r)


def unitary_angle(t):
    """``theta(t) = arccos(2t - 1)``; the unitary has eigenvalues ``exp(+-i theta)``."""
    return np.arccos(np.clip(2.0 * t - 1.0, -1.0, 1.0))


def _merge_into_atoms(atoms, cloud, mass):
    """Move cloud points lying on an atom into that atom."""
    if cloud.size == 0:
        return SpectralMeasure(atoms, cloud, mass).canonical()
    w = mass / cloud.size
    atoms = list(atoms)
    keep = np.ones(cloud.size, dtype=bool)
    for i, (loc, m) in enumerate(atoms):
        hit = np.abs(cloud - loc) <= tol.ATOM_MERGE_TOL
        if hit.any():
            atoms[i] = (loc, m + w * hit.sum())
            keep &= ~hit
    return SpectralMeasure(atoms, cloud[keep], w * keep.sum()).canonical()


def pushforward(tau, h):
    """Distribution of ``h(e, f)`` under ``tau`` for a catalog function ``h``.

    Each point ``t`` of ``mu`` splits into the two eigenvalues of the 2x2
    block ``h(e(t), f(t))``, each carrying ``rho / |mu|``; the corners
    contribute atoms.  For the unitary the measure is on the angle.
    """
    if not isinstance(h, CatalogFunction):
        raise UnsupportedFunctionError(f"no pushforward for {h!r}")
    a11, a10, a01, a00 = tau.alphas
    rho = tau.rho
    tag = h.tag
    if tag is Tag.PQP:
        return psi_map(tau)[2]
    if tag is Tag.ANTICOMMUTATOR:
        atoms = [(0.0, a10 + a01 + a00), (2.0, a11)]
        fn = lambda t: np.concatenate(anticommutator_branches(t))  # noqa: E731
    elif tag is Tag.LINEAR:
        a, b = h.a, h.b
        atoms = [(0.0, a00), (a, a10), (b, a01), (a + b, a11)]
        fn = lambda t: np.concatenate(linear_branches(t, a, b))  # noqa: E731
    elif tag is Tag.UNITARY_PRODUCT:
        atoms = [(0.0, a11 + a00), (np.pi, a10 + a01)]
        fn = lambda t: np.concatenate([unitary_angle(t), -unitary_angle(t)])  # noqa: E731
    else:
        raise UnsupportedFunctionError(f"no pushforward for {h}")
    cloud, mass = _continuous(tau, fn, 2.0 * rho)
    return _merge_into_atoms(atoms, cloud, mass)
