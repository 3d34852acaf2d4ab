"""Statistical verification suites.

Each suite draws its samples from independent streams ``RngStream(seed, i)``
and reduces results in index order, so a report depends only on the
configuration and the master seed, never on the thread count.  Monte Carlo
comparisons use three standard errors estimated from the sample variance.
"""

import itertools
import json
import math
import time
from concurrent.futures import ThreadPoolExecutor
from dataclasses import asdict, dataclass, field

import numpy as np
from scipy.special import roots_legendre

from .ensembles import canonical_pair, sample_pair, selberg_log_z, spectrum_params
from .errors import ParameterError
from .limits import minimizer_pqp, quantile_cloud
from .rate import rate_params, rate_tilde, rate_ts
from .rng import RngStream
from .spectra import (
    ANTICOMMUTATOR,
    PQP,
    UNITARY_PRODUCT,
    SpectralMeasure,
    catalog_spectrum,
    empirical_catalog_measure,
    linear,
)
from .tracial import free_state, from_pair, pushforward
from . import tolerances as tol

__all__ = [
    "SUITES",
    "CheckRecord",
    "VerificationReport",
    "ks_distance",
    "ranks",
    "run_suite",
]


def ranks(N, alpha, beta):
    """Integer ranks ``floor(alpha N + 1/2)``, ``floor(beta N + 1/2)``."""
    return int(math.floor(alpha * N + 0.5)), int(math.floor(beta * N + 0.5))


def ks_distance(cloud, cdf):
    """Kolmogorov-Smirnov distance between the empirical law of ``cloud`` and ``cdf``.

    Both one-sided jumps at every sample point are considered.
    """
    x = np.sort(np.asarray(cloud, float))
    n = x.size
    if n == 0:
        raise ParameterError("ks_distance needs a nonempty cloud")
    F = np.asarray(cdf(x), float)
    i = np.arange(1, n + 1)
    return float(max(np.max(i / n - F), np.max(F - (i - 1) / n)))


@dataclass
class CheckRecord:
    name: str
    statistic: float
    threshold: float
    passed: bool
    samples: int = 0
    seed: int = None


@dataclass
class VerificationReport:
    suite: str
    checks: list = field(default_factory=list)
    duration: float = 0.0

    @property
    def passed(self):
        return all(c.passed for c in self.checks)

    def add(self, name, statistic, threshold, passed=None, samples=0, seed=None):
        if passed is None:
            passed = bool(statistic <= threshold)
        self.checks.append(CheckRecord(name, float(statistic), float(threshold), bool(passed), samples, seed))

    def to_dict(self):
        return {
            "suite": self.suite,
            "passed": self.passed,
            "duration": self.duration,
            "checks": [_jsonable(asdict(c)) for c in self.checks],
        }

    def to_json(self, indent=2):
        return json.dumps(self.to_dict(), indent=indent)


def _jsonable(d):
    out = {}
    for k, v in d.items():
        if isinstance(v, float) and not math.isfinite(v):
            v = "+inf" if v > 0 else ("-inf" if v < 0 else "nan")
        out[k] = v
    return out


def _map(fn, seed, start, count, threads):
    """``[fn(RngStream(seed, start + i)) for i in range(count)]``, possibly threaded."""
    rngs = [RngStream(seed, start + i) for i in range(count)]
    if threads <= 1:
        return [fn(r) for r in rngs]
    with ThreadPoolExecutor(max_workers=threads) as ex:
        return list(ex.map(fn, rngs))


def _mean_se(values):
    v = np.asarray(values, float)
    return v.mean(axis=0), v.std(axis=0, ddof=1) / math.sqrt(v.shape[0])


# ---------------------------------------------------------------- suites


def _selberg_quadrature(n, kappa, lam, nodes=16):
    """Tensor Gauss-Legendre integral of the unnormalized Jacobi density on ``[0, 1]^n``."""
    x, w = roots_legendre(nodes)
    x, w = 0.5 * (x + 1.0), 0.5 * w
    total = 0.0
    for idx in itertools.product(range(nodes), repeat=n):
        pts = x[list(idx)]
        val = np.prod(pts**kappa * (1.0 - pts) ** lam * w[list(idx)])
        for i in range(n):
            for j in range(i + 1, n):
                val *= (pts[i] - pts[j]) ** 2
        total += val
    return total


def _suite_selberg(report, cfg, seed, threads):
    for n, kappa, lam in cfg["cases"]:
        exact = math.exp(selberg_log_z(n, kappa, lam))
        quad = _selberg_quadrature(n, kappa, lam)
        report.add(f"selberg n={n} kappa={kappa} lambda={lam}", abs(exact - quad) / quad, cfg["rtol"])


def _suite_b_limit(report, cfg, seed, threads):
    for alpha, beta in cfg["params"]:
        C = rate_params(alpha, beta).C
        errs = []
        for N in cfg["sizes"]:
            k, l = ranks(N, alpha, beta)  # noqa: E741
            sp = spectrum_params(N, k, l)
            errs.append(abs(selberg_log_z(sp.n, sp.kappaN, sp.lambdaN) / N**2 - C))
        for N, e in zip(cfg["sizes"], errs):
            report.add(f"b_limit alpha={alpha} beta={beta} N={N} error", e, math.inf)
        decreasing = all(b < a for a, b in zip(errs, errs[1:]))
        report.add(f"b_limit alpha={alpha} beta={beta} monotone", float(not decreasing), 0.0)
        report.add(f"b_limit alpha={alpha} beta={beta} final error", errs[-1], cfg["final_tol"])


def _trace_powers(pair, mmax):
    PQ = pair.P @ pair.Q
    out, M = [], np.eye(pair.N)
    for _ in range(mmax):
        M = M @ PQ
        out.append(np.trace(M).real / pair.N)
    return out


def _suite_structure(report, cfg, seed, threads):
    S, mmax = cfg["samples"], cfg["max_power"]
    for block, (N, k, l) in enumerate(cfg["configs"]):  # noqa: E741
        base = 2 * block * S
        haar = _map(lambda r: _trace_powers(sample_pair(N, k, l, r), mmax), seed, base, S, threads)
        canon = _map(lambda r: _trace_powers(canonical_pair(N, k, l, r), mmax), seed, base + S, S, threads)
        m1, s1 = _mean_se(haar)
        m2, s2 = _mean_se(canon)
        for m in range(mmax):
            z = abs(m1[m] - m2[m]) / math.hypot(s1[m], s2[m])
            report.add(f"structure N={N} k={k} l={l} m={m + 1} z-score", z, cfg["sigmas"], samples=2 * S, seed=seed)


def _suite_freeness(report, cfg, seed, threads):
    N, S = cfg["N"], cfg["samples"]
    for block, (alpha, beta) in enumerate(cfg["params"]):
        k, l = ranks(N, alpha, beta)  # noqa: E741
        law = minimizer_pqp(alpha, beta)

        def one(r):
            pair = sample_pair(N, k, l, r)
            w = catalog_spectrum(pair, PQP)
            atom0 = np.mean(np.abs(w) <= tol.ATOM_TOL)
            interior = w[(w > tol.ATOM_TOL) & (w < 1.0 - tol.ATOM_TOL)]
            return atom0, ks_distance(interior, law.continuous_cdf)

        res = np.array(_map(one, seed, block * S, S, threads))
        target = 1.0 - min(alpha, beta)
        tag = f"freeness N={N} alpha={alpha} beta={beta}"
        report.add(f"{tag} atom-at-0 deviation", abs(res[:, 0].mean() - target), cfg["atom_tol"], samples=S, seed=seed)
        report.add(f"{tag} mean KS", res[:, 1].mean(), cfg["ks_tol"], samples=S, seed=seed)


def _suite_rate_min(report, cfg, seed, threads):
    n = cfg["cloud_size"]
    for alpha, beta in cfg["params"]:
        q = quantile_cloud(minimizer_pqp(alpha, beta), n)
        report.add(f"rate_min alpha={alpha} beta={beta} |rate at minimizer|", abs(rate_tilde(q, alpha, beta)), cfg["min_tol"])
        report.add(f"rate_min alpha={alpha} beta={beta} |rate_ts at free state|", abs(rate_ts(free_state(alpha, beta, n), alpha, beta)), cfg["min_tol"])
    uniform = SpectralMeasure([(0.0, 0.5)], (np.arange(n) + 0.5) / n, 0.5)
    expected = 3.0 / 8.0 - math.log(2.0) / 2.0
    report.add("rate_min uniform substitution error", abs(rate_tilde(uniform, 0.5, 0.5) - expected), cfg["uniform_tol"])
    bad = SpectralMeasure([(0.0, 0.4)], (np.arange(n) + 0.5) / n, 0.6)
    value = rate_tilde(bad, 0.5, 0.5)
    report.add("rate_min violated atom is +inf", value, math.inf, passed=value == math.inf)


def _contraction_one(N, k, l, functions):  # noqa: E741
    def one(r):
        pair = sample_pair(N, k, l, r)
        tau = from_pair(pair)
        worst = 0.0
        for h in functions:
            push = pushforward(tau, h).canonical()
            emp = empirical_catalog_measure(pair, h).canonical()
            if not push.allclose(emp, atol=tol.ATOM_TOL):
                return math.inf
            worst = max(worst, _measure_gap(push, emp))
        return worst

    return one


def _measure_gap(a, b):
    gaps = [abs(x1 - x2) + abs(m1 - m2) for (x1, m1), (x2, m2) in zip(a.atoms, b.atoms)]
    gaps.append(abs(a.cloud_mass - b.cloud_mass))
    if a.cloud.size:
        gaps.append(float(np.max(np.abs(a.cloud - b.cloud))))
    return max(gaps)


def _suite_contraction(report, cfg, seed, threads):
    a, b = cfg["linear"]
    functions = [PQP, ANTICOMMUTATOR, linear(a, b), UNITARY_PRODUCT]
    S = cfg["samples"]
    for block, (N, k, l) in enumerate(cfg["configs"]):  # noqa: E741
        gaps = _map(_contraction_one(N, k, l, functions), seed, block * S, S, threads)
        report.add(f"contraction N={N} k={k} l={l} max gap", max(gaps), cfg["atol"], samples=S, seed=seed)


def _suite_moments(report, cfg, seed, threads):
    N, k, l, S = cfg["N"], cfg["k"], cfg["l"], cfg["samples"]  # noqa: E741

    def one(r):
        pair = sample_pair(N, k, l, r)
        PQ, PQP_ = pair.P @ pair.Q, pair.P @ pair.Q @ pair.P
        A, B, gap = np.eye(N), np.eye(N), 0.0
        for _ in range(cfg["max_power"]):
            A, B = A @ PQ, B @ PQP_
            gap = max(gap, abs(np.trace(A) - np.trace(B)) / N)
        return gap, np.trace(PQ).real / N

    res = np.array(_map(one, seed, 0, S, threads))
    report.add(f"moments N={N} k={k} l={l} max |tr(PQ)^m - tr(PQP)^m|", res[:, 0].max(), cfg["identity_tol"], samples=S, seed=seed)
    mean, se = _mean_se(res[:, 1])
    z = abs(mean - k * l / N**2) / se
    report.add(f"moments N={N} k={k} l={l} E tr(PQ) z-score", z, cfg["sigmas"], samples=S, seed=seed)


def _suite_unitary_law(report, cfg, seed, threads):
    N, S = cfg["N"], cfg["samples"]
    alpha, beta = cfg["alpha"], cfg["beta"]
    k, l = ranks(N, alpha, beta)  # noqa: E741

    def uniform_cdf(theta):
        return (np.asarray(theta) + np.pi) / (2.0 * np.pi)

    def one(r):
        return ks_distance(catalog_spectrum(sample_pair(N, k, l, r), UNITARY_PRODUCT), uniform_cdf)

    ks = _map(one, seed, 0, S, threads)
    report.add(f"unitary_law N={N} mean KS vs uniform circle", float(np.mean(ks)), cfg["ks_tol"], samples=S, seed=seed)


SUITES = {
    "SELBERG": (
        _suite_selberg,
        {"cases": [(1, 0, 0), (2, 0, 0), (2, 1, 1), (3, 2, 1)], "rtol": 1e-6},
    ),
    "B_LIMIT": (
        _suite_b_limit,
        {"params": [(0.5, 0.5), (0.3, 0.6)], "sizes": [64, 128, 256], "final_tol": 0.05},
    ),
    "STRUCTURE": (
        _suite_structure,
        {"configs": [(12, 3, 4), (12, 7, 8)], "samples": 10_000, "max_power": 4, "sigmas": 3.0},
    ),
    "FREENESS": (
        _suite_freeness,
        {"N": 512, "params": [(0.5, 0.5), (0.3, 0.6)], "samples": 20, "atom_tol": 0.02, "ks_tol": 0.05},
    ),
    "RATE_MIN": (
        _suite_rate_min,
        {"params": [(0.5, 0.5), (0.3, 0.6)], "cloud_size": 2000, "min_tol": 1e-2, "uniform_tol": 2e-3},
    ),
    "CONTRACTION": (
        _suite_contraction,
        {
            "configs": [(8, 3, 4), (8, 5, 6), (64, 20, 30), (64, 40, 50)],
            "samples": 100,
            "linear": (2.0, -1.0),
            "atol": 1e-8,
        },
    ),
    "MOMENTS": (
        _suite_moments,
        {"N": 64, "k": 20, "l": 30, "samples": 10_000, "max_power": 5, "identity_tol": 1e-10, "sigmas": 3.0},
    ),
    "UNITARY_LAW": (
        _suite_unitary_law,
        {"N": 512, "alpha": 0.5, "beta": 0.5, "samples": 20, "ks_tol": 0.05},
    ),
}


def run_suite(name, config=None, master_seed=0):
    """Run a verification suite (or ``"all"``) and return its report.

    Parameters
    ----------
    name : str
        One of :data:`SUITES` (case-insensitive) or ``"all"``.
    config : dict, optional
        Overrides for the suite defaults.  ``threads`` sets the worker count.
    master_seed : int
    """
    config = dict(config or {})
    threads = int(config.pop("threads", 1))
    key = str(name).upper()
    if key == "ALL":
        t0 = time.perf_counter()
        report = VerificationReport("all")
        for suite in SUITES:
            sub = run_suite(suite, dict(config.get(suite, {}), threads=threads), master_seed)
            for c in sub.checks:
                c.name = f"{suite}: {c.name}"
                report.checks.append(c)
        report.duration = time.perf_counter() - t0
        return report
    if key not in SUITES:
        raise ParameterError(f"unknown suite {name!r}; choose from {sorted(SUITES)} or 'all'")
    fn, defaults = SUITES[key]
    unknown = set(config) - set(defaults)
    if unknown:
        raise ParameterError(f"unknown config keys for {key}: {sorted(unknown)}")
    cfg = {**defaults, **config}
    report = VerificationReport(key)
    t0 = time.perf_counter()
    fn(report, cfg, master_seed, threads)
    report.duration = time.perf_counter() - t0
    return report
