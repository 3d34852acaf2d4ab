"""Every catalog spectrum is a function of the tracial state of the pair.

For a finite pair the tracial state consists of four corner weights and the
interior PQP eigenvalues.  Pushing it forward through a catalog function
reproduces the spectrum of that function of the matrices exactly, and the
contracted rate function agrees with the rate on states.
"""

from twoproj import (
    ANTICOMMUTATOR,
    PQP,
    UNITARY_PRODUCT,
    RngStream,
    empirical_catalog_measure,
    free_state,
    from_pair,
    linear,
    pushforward,
    rate_contracted,
    rate_ts,
    sample_pair,
)

catalog = (PQP, ANTICOMMUTATOR, linear(2, -1), linear(1, 1), UNITARY_PRODUCT)

pair = sample_pair(64, 20, 30, RngStream(5))
tau = from_pair(pair)
print("corner weights (a11, a10, a01, a00):", tau.alphas, f"rho={tau.rho}")
for h in catalog:
    ok = pushforward(tau, h).allclose(empirical_catalog_measure(pair, h), atol=1e-8)
    print(f"  {str(h):<16} pushforward matches the matrix spectrum: {ok}")

alpha, beta = 0.3, 0.6
state = free_state(alpha, beta)
print(f"\nfree state at ({alpha}, {beta}): rate on states {rate_ts(state, alpha, beta):+.2e}")
for h in catalog:
    print(f"  {str(h):<16} contracted rate {rate_contracted(pushforward(state, h), h, alpha, beta):+.2e}")
