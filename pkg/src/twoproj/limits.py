"""Limiting eigenvalue laws of functions of two free projections.

Every law is stored as atoms plus a density on finitely many disjoint
intervals.  Integrals over an interval ``(c - w, c + w)`` use the change of
variables ``x = c + w sin(u)`` followed by composite Gauss-Legendre
quadrature in ``u``; the substitution absorbs inverse square-root edge
singularities, which all of these laws have when an edge sits at a forced
atom.
"""

from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.special import roots_legendre

from . import tolerances as tol
from .errors import ParameterError, UnsupportedFunctionError
from .spectra import SpectralMeasure, Tag

__all__ = [
    "LimitLaw",
    "free_edges",
    "minimizer_pqp",
    "minimizer_for",
    "quantile_cloud",
]

_PANELS = 128
_NODES, _WEIGHTS = roots_legendre(16)
_BISECT_STEPS = 60


class _Interval:
    """Composite Gauss-Legendre quadrature of a density on one interval."""

    def __init__(self, lo, hi, density):
        self.lo, self.hi = float(lo), float(hi)
        self.c = 0.5 * (self.lo + self.hi)
        self.w = 0.5 * (self.hi - self.lo)
        self.density = density
        self.edges = np.linspace(-0.5 * np.pi, 0.5 * np.pi, _PANELS + 1)
        panel = self._integrate(self.edges[:-1], self.edges[1:])
        self.cum = np.concatenate([[0.0], np.cumsum(panel)])
        self.mass = self.cum[-1]

    def x_of(self, u):
        return self.c + self.w * np.sin(u)

    def _integrand(self, u, fn=None):
        x = self.x_of(u)
        val = self.density(x) * self.w * np.cos(u)
        if fn is not None:
            val = val * fn(x)
        return val

    def _integrate(self, a, b, fn=None):
        """Gauss-Legendre on each ``[a_i, b_i]`` (arrays of equal shape)."""
        a = np.asarray(a, float)[..., None]
        b = np.asarray(b, float)[..., None]
        half = 0.5 * (b - a)
        u = a + half * (_NODES + 1.0)
        return np.sum(_WEIGHTS * self._integrand(u, fn), axis=-1) * half[..., 0]

    def integrate(self, fn):
        return float(np.sum(self._integrate(self.edges[:-1], self.edges[1:], fn)))

    def mass_below_u(self, u):
        u = np.clip(np.asarray(u, float), self.edges[0], self.edges[-1])
        p = np.clip(np.searchsorted(self.edges, u, side="right") - 1, 0, _PANELS - 1)
        return self.cum[p] + self._integrate(self.edges[p], u)

    def mass_below(self, x):
        x = np.asarray(x, float)
        s = np.clip((x - self.c) / self.w, -1.0, 1.0)
        return self.mass_below_u(np.arcsin(s))

    def quantile_x(self, target):
        """Points where the accumulated mass equals ``target`` (vectorized bisection in u)."""
        target = np.asarray(target, float)
        lo = np.full(target.shape, self.edges[0])
        hi = np.full(target.shape, self.edges[-1])
        for _ in range(_BISECT_STEPS):
            mid = 0.5 * (lo + hi)
            below = self.mass_below_u(mid) < target
            lo = np.where(below, mid, lo)
            hi = np.where(below, hi, mid)
        return self.x_of(0.5 * (lo + hi))


@dataclass
class LimitLaw:
    """Atoms plus a density on disjoint open intervals.

    For laws of the unitary, locations are angles in ``(-pi, pi]``
    (``domain == "angle"``).
    """

    atoms: list
    support: list
    density: Callable = None
    continuous_mass: float = 0.0
    domain: str = "real"
    _parts: list = field(default=None, init=False, repr=False)

    def __post_init__(self):
        self.atoms = [(float(x), float(m)) for x, m in self.atoms if m > 0.0]
        self.support = [(float(a), float(b)) for a, b in self.support if b > a]
        self._parts = [_Interval(a, b, self.pdf) for a, b in self.support]

    def pdf(self, x):
        """Density of the continuous part (0 off the support)."""
        x = np.asarray(x, float)
        inside = np.zeros(x.shape, dtype=bool)
        for a, b in self.support:
            inside |= (x > a) & (x < b)
        out = np.zeros(x.shape)
        if inside.any() and self.density is not None:
            with np.errstate(divide="ignore", invalid="ignore"):
                vals = self.density(x[inside])
            out[inside] = np.nan_to_num(vals, nan=0.0, posinf=0.0)
        return out

    @property
    def integrated_mass(self):
        """Continuous mass by quadrature."""
        return float(sum(p.mass for p in self._parts))

    @property
    def atom_mass(self):
        return sum(m for _, m in self.atoms)

    def integrate(self, fn):
        """``int fn d(law)`` over atoms and continuous part."""
        total = sum(m * float(fn(np.float64(x))) for x, m in self.atoms)
        return total + sum(p.integrate(fn) for p in self._parts)

    def moment(self, m):
        return self.integrate(lambda x: x**m)

    def mean(self):
        return self.moment(1)

    def continuous_cdf(self, x):
        """CDF of the continuous part normalized to a probability measure."""
        x = np.asarray(x, float)
        total = self.integrated_mass
        if total <= 0.0:
            raise ParameterError("law has no continuous part")
        acc = np.zeros(x.shape)
        for p in self._parts:
            acc = acc + p.mass_below(x)
        return np.clip(acc / total, 0.0, 1.0)

    def cdf(self, x):
        """CDF of the full law."""
        x = np.asarray(x, float)
        out = np.zeros(x.shape)
        for loc, m in self.atoms:
            out = out + m * (x >= loc)
        for p in self._parts:
            out = out + p.mass_below(x)
        return out

    def quantiles(self, levels):
        """Quantiles of the normalized continuous part at ``levels`` in ``(0, 1)``."""
        levels = np.asarray(levels, float)
        masses = np.array([p.mass for p in self._parts])
        total = masses.sum()
        if total <= 0.0:
            return np.empty(0)
        target = levels * total
        starts = np.concatenate([[0.0], np.cumsum(masses)[:-1]])
        which = np.clip(np.searchsorted(np.cumsum(masses), target, side="left"), 0, len(masses) - 1)
        out = np.empty(levels.shape)
        for i, p in enumerate(self._parts):
            sel = which == i
            if sel.any():
                out[sel] = p.quantile_x(target[sel] - starts[i])
        return out

    def to_dict(self, grid=1000):
        """Export for plotting: density sampled at ``grid`` cell midpoints."""
        out = {
            "domain": self.domain,
            "atoms": [[x, m] for x, m in self.atoms],
            "support": [[a, b] for a, b in self.support],
            "continuous_mass": self.continuous_mass,
            "grid": [],
            "density_values": [],
        }
        if self.support:
            lo = min(a for a, _ in self.support)
            hi = max(b for _, b in self.support)
            edges = np.linspace(lo, hi, grid + 1)
            xs = 0.5 * (edges[:-1] + edges[1:])
            out["grid"] = [float(v) for v in xs]
            out["density_values"] = [float(v) for v in self.pdf(xs)]
        return out


def free_edges(alpha, beta):
    """Support edges ``xi < eta`` of the continuous part of the free ``pqp`` law."""
    center = alpha + beta - 2.0 * alpha * beta
    half = np.sqrt(max(4.0 * alpha * beta * (1.0 - alpha) * (1.0 - beta), 0.0))
    return max(center - half, 0.0), min(center + half, 1.0)


def _check_unit(alpha, beta):
    if not (0.0 <= alpha <= 1.0 and 0.0 <= beta <= 1.0):
        raise ParameterError(f"alpha and beta must lie in [0, 1], got ({alpha}, {beta})")


def _rho(alpha, beta):
    return min(alpha, beta, 1.0 - alpha, 1.0 - beta)


def _pqp_density(xi, eta):
    def density(x):
        return np.sqrt((x - xi) * (eta - x)) / (2.0 * np.pi * x * (1.0 - x))

    return density


def minimizer_pqp(alpha, beta):
    """Law of ``pqp`` for free projections with ``tau(p) = alpha``, ``tau(q) = beta``.

    Atoms ``(1 - min(alpha, beta))`` at 0 and ``max(alpha + beta - 1, 0)`` at
    1; density ``sqrt((x - xi)(eta - x)) / (2 pi x (1 - x))`` on ``(xi, eta)``
    with ``xi, eta = alpha + beta - 2 alpha beta -+ sqrt(4 alpha beta (1-alpha)(1-beta))``.
    """
    _check_unit(alpha, beta)
    rho = _rho(alpha, beta)
    atoms = [(0.0, 1.0 - min(alpha, beta)), (1.0, max(alpha + beta - 1.0, 0.0))]
    if rho <= 0.0:
        return LimitLaw(atoms, [])
    xi, eta = free_edges(alpha, beta)
    return LimitLaw(atoms, [(xi, eta)], _pqp_density(xi, eta), rho)


def _anticommutator_law(alpha, beta):
    rho = _rho(alpha, beta)
    atoms = [
        (0.0, max(abs(alpha - beta), 1.0 - 2.0 * alpha, 1.0 - 2.0 * beta)),
        (2.0, max(alpha + beta - 1.0, 0.0)),
    ]
    if rho <= 0.0:
        return LimitLaw(atoms, [])
    xi, eta = free_edges(alpha, beta)
    g = _pqp_density(xi, eta)

    def g_on(t):
        inside = (t > xi) & (t < eta)
        out = np.zeros(np.shape(t))
        out[inside] = g(t[inside])
        return out

    def density(y):
        y = np.asarray(y, float)
        out = np.zeros(y.shape)
        pos = y > 0
        # y = t + sqrt(t): r = sqrt(t) = (sqrt(1 + 4y) - 1) / 2, dt/dy = 2r / (2r + 1)
        r = 0.5 * (np.sqrt(1.0 + 4.0 * y[pos]) - 1.0)
        out[pos] = g_on(r * r) * 2.0 * r / (2.0 * r + 1.0)
        neg = ~pos
        # y = t - sqrt(t) has roots r = (1 -+ sqrt(1 + 4y)) / 2, |dt/dy| = 2r / sqrt(1 + 4y)
        d = np.sqrt(np.maximum(1.0 + 4.0 * y[neg], 0.0))
        r1, r2 = 0.5 * (1.0 - d), 0.5 * (1.0 + d)
        out[neg] = (g_on(r1 * r1) * 2.0 * r1 + g_on(r2 * r2) * 2.0 * r2) / d
        return out

    def S(t):
        return t + np.sqrt(t)

    def T(t):
        return t - np.sqrt(t)

    support = [(S(xi), S(eta))]
    lo_t, hi_t = sorted((T(xi), T(eta)))
    if xi < 0.25 < eta:
        support += [(-0.25, lo_t), (lo_t, hi_t)]
    else:
        support.append((lo_t, hi_t))
    return LimitLaw(atoms, sorted(support), density, 2.0 * rho)


def _linear_law(a, b, alpha, beta):
    rho = _rho(alpha, beta)
    raw = [
        (0.0, max(1.0 - alpha - beta, 0.0)),
        (a, max(alpha - beta, 0.0)),
        (b, max(beta - alpha, 0.0)),
        (a + b, max(alpha + beta - 1.0, 0.0)),
    ]
    merged = {}
    for x, m in raw:
        merged[x] = merged.get(x, 0.0) + m
    atoms = sorted(merged.items())
    if rho <= 0.0:
        return LimitLaw(atoms, [])
    xi, eta = free_edges(alpha, beta)
    s = a + b
    A0 = 0.5 * (s - np.sqrt((a - b) ** 2 + 4.0 * a * b * eta))
    B0 = 0.5 * (s - np.sqrt((a - b) ** 2 + 4.0 * a * b * xi))
    A0, B0 = min(A0, B0), max(A0, B0)

    def density(x):
        x = np.asarray(x, float)
        quartic = -(x - A0) * (x - B0) * (x - s + B0) * (x - s + A0)
        num = np.abs(x - 0.5 * s) * np.sqrt(np.maximum(quartic, 0.0))
        return num / (np.pi * np.abs(x * (x - a) * (x - b) * (x - s)))

    support = [(A0, B0), (s - B0, s - A0)]
    return LimitLaw(atoms, support, density, 2.0 * rho)


def _unitary_law(alpha, beta):
    rho = _rho(alpha, beta)
    atoms = [(0.0, abs(alpha + beta - 1.0)), (np.pi, abs(alpha - beta))]
    if rho <= 0.0:
        return LimitLaw(atoms, [], domain="angle")
    xi, eta = free_edges(alpha, beta)
    theta1 = float(np.arccos(2.0 * eta - 1.0))
    theta2 = float(np.arccos(2.0 * xi - 1.0))

    def density(theta):
        # -(cos + 1 - 2 xi)(cos + 1 - 2 eta) in half-angle form, exact near theta = 0, pi
        ch, sh = np.cos(0.5 * theta) ** 2, np.sin(0.5 * theta) ** 2
        prod = 4.0 * (ch - xi) * (sh - (1.0 - eta))
        return np.sqrt(np.maximum(prod, 0.0)) / (2.0 * np.pi * np.abs(np.sin(theta)))

    support = [(-theta2, -theta1), (theta1, theta2)]
    return LimitLaw(atoms, support, density, 2.0 * rho, domain="angle")


def minimizer_for(h, alpha, beta):
    """Limit law of ``h(P(N), Q(N))`` for a catalog function ``h``."""
    _check_unit(alpha, beta)
    tag = getattr(h, "tag", None)
    if tag is Tag.PQP:
        return minimizer_pqp(alpha, beta)
    if tag is Tag.ANTICOMMUTATOR:
        return _anticommutator_law(alpha, beta)
    if tag is Tag.LINEAR:
        if not h.a or not h.b:
            raise ParameterError("LINEAR requires nonzero a and b")
        return _linear_law(h.a, h.b, alpha, beta)
    if tag is Tag.UNITARY_PRODUCT:
        return _unitary_law(alpha, beta)
    raise UnsupportedFunctionError(f"no limit law for {h!r}")


def quantile_cloud(law, n=tol.DEFAULT_CLOUD_SIZE):
    """Discretize ``law``: atoms kept, continuous part replaced by its ``(i - 1/2)/n`` quantiles."""
    if n < 2:
        raise ParameterError("quantile_cloud needs n >= 2")
    if not law.support:
        return SpectralMeasure(law.atoms)
    levels = (np.arange(1, n + 1) - 0.5) / n
    return SpectralMeasure(law.atoms, law.quantiles(levels), law.continuous_mass)
