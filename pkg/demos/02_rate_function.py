"""The large-deviation rate of the PQP spectrum, evaluated on discretized measures.

The rate vanishes at the free limit law and is positive elsewhere.  We
move away from the minimizer by mixing in uniform noise, check the
closed-form value at the uniform law, and watch the Jacobi normalization
constant approach its limit.
"""

import math

import numpy as np
from scipy.optimize import brentq

from twoproj import SpectralMeasure, minimizer_pqp, quantile_cloud, rate_params, rate_tilde, selberg_log_z, spectrum_params
from twoproj.harness import ranks

alpha, beta = 0.3, 0.6
law = minimizer_pqp(alpha, beta)
rho = rate_params(alpha, beta).rho
print(f"alpha={alpha}, beta={beta}: rho={rho:.3f}, C={rate_params(alpha, beta).C:.6f}")
print(f"rate at the limit law (2000-point quantile cloud): {rate_tilde(quantile_cloud(law), alpha, beta):+.2e}")

levels = (np.arange(2000) + 0.5) / 2000
print("\n eps   rate of (1-eps) limit + eps uniform")
for eps in (0.0, 0.05, 0.1, 0.2, 0.4):
    cdf = lambda x: (1 - eps) * law.continuous_cdf(x) + eps * x  # noqa: E731
    pts = [brentq(lambda x: cdf(x) - u, 0, 1, xtol=1e-14) for u in levels]
    print(f" {eps:.2f}  {rate_tilde(SpectralMeasure(law.atoms, pts, rho), alpha, beta):.5f}")

u = SpectralMeasure([(0.0, 0.5)], levels, 0.5)
print(f"\nuniform interior at alpha=beta=1/2: {rate_tilde(u, 0.5, 0.5):.5f} (exact {3 / 8 - math.log(2) / 2:.5f})")
print("an atom of the wrong size gives", rate_tilde(SpectralMeasure([(0.0, 0.4)], levels, 0.6), 0.5, 0.5))

print("\n   N   N^-2 log Z - C")
C = rate_params(alpha, beta).C
for N in (32, 64, 128, 256, 512, 1024):
    sp = spectrum_params(N, *ranks(N, alpha, beta))
    print(f"{N:5d}   {selberg_log_z(sp.n, sp.kappaN, sp.lambdaN) / N**2 - C:+.5f}")
