"""Functions of a projection pair, their spectra, and spectral measures.

The catalog covers ``PQP``, ``PQ + QP``, ``aP + bQ`` and the unitary
``exp(i pi P) exp(-i pi Q)``.  Spectra are summarized as
:class:`SpectralMeasure` objects: finitely many atoms plus an equal-weight
point cloud carrying the remaining mass.  Measures of the unitary live on
the angle in ``(-pi, pi]``.
"""

from dataclasses import dataclass, field
from enum import Enum

import numpy as np

from . import tolerances as tol
from .errors import ParameterError, UnsupportedFunctionError
from .linalg import hermitian_eigs

__all__ = [
    "Tag",
    "CatalogFunction",
    "PQP",
    "ANTICOMMUTATOR",
    "UNITARY_PRODUCT",
    "linear",
    "catalog_from_name",
    "SpectralMeasure",
    "apply_catalog",
    "catalog_spectrum",
    "atom_locations",
    "unitary_angles",
    "empirical_measure",
    "empirical_catalog_measure",
    "word_moment",
]


class Tag(str, Enum):
    PQP = "pqp"
    ANTICOMMUTATOR = "anticommutator"
    LINEAR = "linear"
    UNITARY_PRODUCT = "unitary"


@dataclass(frozen=True)
class CatalogFunction:
    """A function ``h(P, Q)`` from the implemented catalog."""

    tag: Tag
    a: float = None
    b: float = None

    def __post_init__(self):
        object.__setattr__(self, "tag", Tag(self.tag))
        if self.tag is Tag.LINEAR:
            if self.a is None or self.b is None or self.a == 0 or self.b == 0:
                raise ParameterError("LINEAR requires nonzero coefficients a and b")

    @property
    def is_unitary(self):
        return self.tag is Tag.UNITARY_PRODUCT

    def __str__(self):
        if self.tag is Tag.LINEAR:
            return f"linear({self.a:g},{self.b:g})"
        return self.tag.value


PQP = CatalogFunction(Tag.PQP)
ANTICOMMUTATOR = CatalogFunction(Tag.ANTICOMMUTATOR)
UNITARY_PRODUCT = CatalogFunction(Tag.UNITARY_PRODUCT)


def linear(a, b):
    """``aP + bQ``; both coefficients must be nonzero."""
    return CatalogFunction(Tag.LINEAR, float(a), float(b))


def catalog_from_name(name, a=None, b=None):
    try:
        tag = Tag(name)
    except ValueError:
        raise UnsupportedFunctionError(f"unknown catalog function {name!r}") from None
    if tag is Tag.LINEAR:
        return linear(a, b)
    return CatalogFunction(tag)


@dataclass
class SpectralMeasure:
    """Probability measure = atoms + equal-weight cloud.

    Attributes
    ----------
    atoms : list of (location, mass)
    cloud : ndarray
        Locations of the continuous part, each carrying ``cloud_mass / len(cloud)``.
    cloud_mass : float
    """

    atoms: list = field(default_factory=list)
    cloud: np.ndarray = field(default_factory=lambda: np.empty(0))
    cloud_mass: float = 0.0

    def __post_init__(self):
        self.atoms = [(float(x), float(m)) for x, m in self.atoms]
        self.cloud = np.asarray(self.cloud, dtype=float).ravel()
        self.cloud_mass = float(self.cloud_mass)
        if self.cloud.size == 0 and self.cloud_mass != 0.0:
            raise ParameterError("an empty cloud cannot carry mass")

    @property
    def atom_mass(self):
        return sum(m for _, m in self.atoms)

    @property
    def total_mass(self):
        return self.atom_mass + self.cloud_mass

    @property
    def point_weight(self):
        return self.cloud_mass / self.cloud.size if self.cloud.size else 0.0

    def atom_at(self, loc, atol=tol.ATOM_MERGE_TOL):
        """Mass of the atom at ``loc`` (0 if absent)."""
        return sum(m for x, m in self.atoms if abs(x - loc) <= atol)

    def canonical(self):
        """Sorted copy with coincident atoms merged and massless atoms dropped."""
        merged = {}
        for x, m in sorted(self.atoms):
            key = next((k for k in merged if abs(k - x) <= tol.ATOM_MERGE_TOL), x)
            merged[key] = merged.get(key, 0.0) + m
        atoms = [(x, m) for x, m in sorted(merged.items()) if m > 0.0]
        return SpectralMeasure(atoms, np.sort(self.cloud), self.cloud_mass)

    def normalized_cloud(self):
        """The continuous part rescaled to a probability measure (atom-free)."""
        return SpectralMeasure([], np.sort(self.cloud), 1.0 if self.cloud.size else 0.0)

    def points_and_weights(self):
        locs = np.array([x for x, _ in self.atoms] + list(self.cloud))
        w = np.array([m for _, m in self.atoms] + [self.point_weight] * self.cloud.size)
        return locs, w

    def moment(self, m):
        """``int x^m`` against the measure."""
        x, w = self.points_and_weights()
        return float(np.sum(w * x**m))

    def cdf(self, x):
        locs, w = self.points_and_weights()
        order = np.argsort(locs, kind="stable")
        cum = np.cumsum(w[order])
        idx = np.searchsorted(locs[order], np.asarray(x, dtype=float), side="right")
        return np.where(idx > 0, cum[np.maximum(idx - 1, 0)], 0.0)

    def mix(self, other, c):
        """``c * self + (1 - c) * other`` as a measure."""
        atoms = [(x, c * m) for x, m in self.atoms] + [(x, (1 - c) * m) for x, m in other.atoms]
        parts = []
        if c > 0 and self.cloud.size:
            parts.append((self.cloud, c * self.cloud_mass))
        if c < 1 and other.cloud.size:
            parts.append((other.cloud, (1 - c) * other.cloud_mass))
        return SpectralMeasure(atoms, *_merge_clouds(parts)).canonical()

    def to_dict(self):
        return {
            "atoms": [[x, m] for x, m in self.atoms],
            "cloud": [float(v) for v in self.cloud],
            "cloud_mass": self.cloud_mass,
        }

    @classmethod
    def from_dict(cls, d):
        return cls([tuple(a) for a in d.get("atoms", [])], d.get("cloud", []), d.get("cloud_mass", 0.0))

    def allclose(self, other, atol=tol.RESIDUAL_TOL):
        """Equality after canonical sorting, within ``atol`` on locations and masses."""
        a, b = self.canonical(), other.canonical()
        if len(a.atoms) != len(b.atoms) or a.cloud.size != b.cloud.size:
            return False
        for (x1, m1), (x2, m2) in zip(a.atoms, b.atoms):
            if abs(x1 - x2) > atol or abs(m1 - m2) > atol:
                return False
        if abs(a.cloud_mass - b.cloud_mass) > atol:
            return False
        return bool(np.all(np.abs(a.cloud - b.cloud) <= atol))


def _merge_clouds(parts):
    """Combine weighted clouds into one equal-weight cloud.

    Exact only when every part has the same per-point weight; otherwise the
    points are replicated in proportion to their weights, which is exact
    when the weight ratios are rational with small denominators (the
    convex combinations used in tests) and raises otherwise.
    """
    parts = [(np.asarray(p, float), m) for p, m in parts if len(p) and m > 0]
    if not parts:
        return np.empty(0), 0.0
    mass = sum(m for _, m in parts)
    weights = [m / len(p) for p, m in parts]
    base = min(weights)
    reps = [w / base for w in weights]
    if any(abs(r - round(r)) > 1e-9 for r in reps):
        raise ParameterError("clouds with incommensurate point weights cannot be merged")
    cloud = np.concatenate([np.repeat(p, int(round(r))) for (p, _), r in zip(parts, reps)])
    return np.sort(cloud), mass


def apply_catalog(pair, h):
    """Matrix ``h(P, Q)``; the unitary uses ``exp(i pi P) = I - 2P``."""
    P, Q = pair.P, pair.Q
    if h.tag is Tag.PQP:
        M = P @ Q @ P
    elif h.tag is Tag.ANTICOMMUTATOR:
        M = P @ Q + Q @ P
    elif h.tag is Tag.LINEAR:
        M = h.a * P + h.b * Q
    elif h.tag is Tag.UNITARY_PRODUCT:
        eye = np.eye(pair.N)
        return (eye - 2.0 * P) @ (eye - 2.0 * Q)
    else:  # pragma: no cover - Tag is closed
        raise UnsupportedFunctionError(str(h))
    return 0.5 * (M + M.conj().T)


def unitary_angles(U):
    """Eigen-angles in ``(-pi, pi]`` of a unitary matrix, sorted ascending.

    The product of two reflections is normal, so LAPACK's backward-stable
    general eigensolver returns eigenvalues accurate to machine precision
    on the circle.
    """
    theta = np.angle(np.linalg.eigvals(U))
    theta = np.where(theta <= -np.pi + tol.ATOM_TOL, np.pi, theta)
    return np.sort(theta)


def catalog_spectrum(pair, h):
    """Sorted eigenvalues of ``h(P, Q)`` (angles for the unitary)."""
    M = apply_catalog(pair, h)
    if h.is_unitary:
        return unitary_angles(M)
    return hermitian_eigs(M)


def atom_locations(h):
    """Locations where ``h(P, Q)`` can have forced eigenvalues."""
    if h.tag is Tag.PQP:
        locs = [0.0, 1.0]
    elif h.tag is Tag.ANTICOMMUTATOR:
        locs = [0.0, 2.0]
    elif h.tag is Tag.LINEAR:
        locs = [0.0, h.a, h.b, h.a + h.b]
    elif h.tag is Tag.UNITARY_PRODUCT:
        locs = [0.0, np.pi]
    else:  # pragma: no cover
        raise UnsupportedFunctionError(str(h))
    return sorted(set(locs))


def empirical_measure(eigs, atom_locs, atol=tol.ATOM_TOL):
    """Split a spectrum into atoms at declared locations and an equal-weight cloud.

    Eigenvalues within ``atol`` of an atom location count towards that atom;
    atoms that receive no eigenvalue are omitted.

    Raises
    ------
    ParameterError
        If ``eigs`` is empty or two distinct atom windows overlap.
    """
    eigs = np.sort(np.asarray(eigs, dtype=float))
    if eigs.size == 0:
        raise ParameterError("empirical_measure needs at least one eigenvalue")
    locs = sorted(set(float(x) for x in atom_locs))
    if any(b - a <= 2 * atol for a, b in zip(locs, locs[1:])):
        raise ParameterError("atom windows overlap")
    n = eigs.size
    free = np.ones(n, dtype=bool)
    atoms = []
    for loc in locs:
        hit = np.abs(eigs - loc) <= atol
        if hit.any():
            atoms.append((loc, hit.sum() / n))
            free &= ~hit
    cloud = eigs[free]
    return SpectralMeasure(atoms, cloud, cloud.size / n)


def empirical_catalog_measure(pair, h, atol=tol.ATOM_TOL):
    """Empirical eigenvalue distribution of ``h(P, Q)`` with catalog atoms declared."""
    return empirical_measure(catalog_spectrum(pair, h), atom_locations(h), atol)


def word_moment(pair, word):
    """Normalized trace of the product spelled by ``word`` over ``{'e', 'f'}``.

    ``'e'`` stands for ``P`` and ``'f'`` for ``Q``; the empty word gives 1.
    """
    mats = {"e": pair.P, "f": pair.Q}
    M = np.eye(pair.N, dtype=complex)
    for ch in word:
        try:
            M = M @ mats[ch]
        except KeyError:
            raise ParameterError(f"words are over {{'e','f'}}, got {ch!r}") from None
    return complex(np.trace(M) / pair.N)
