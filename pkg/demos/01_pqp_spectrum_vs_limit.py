"""How close is the spectrum of PQP at moderate N to its free limit?

We draw a pair of independent unitarily invariant projections with rank
ratios (alpha, beta), split the spectrum of PQP into forced atoms and an
interior cloud, and compare the cloud with the continuous part of the
limiting law.  The same comparison is run for every catalog function.
"""

import numpy as np

from twoproj import (
    ANTICOMMUTATOR,
    PQP,
    UNITARY_PRODUCT,
    RngStream,
    empirical_catalog_measure,
    ks_distance,
    linear,
    minimizer_for,
    sample_pair,
)
from twoproj.harness import ranks

N, alpha, beta = 400, 0.3, 0.6
k, l = ranks(N, alpha, beta)
pair = sample_pair(N, k, l, RngStream(2024))
print(f"N={N}, rank(P)={k}, rank(Q)={l}")

for h in (PQP, ANTICOMMUTATOR, linear(2, -1), UNITARY_PRODUCT):
    emp = empirical_catalog_measure(pair, h)
    law = minimizer_for(h, alpha, beta)
    ks = ks_distance(emp.cloud, law.continuous_cdf)
    print(f"\n{h}")
    print("  atoms (empirical):", [(round(x, 4), round(m, 4)) for x, m in emp.atoms])
    print("  atoms (limit)    :", [(round(x, 4), round(m, 4)) for x, m in law.atoms])
    print(f"  continuous mass: empirical {emp.cloud_mass:.4f}, limit {law.continuous_mass:.4f}")
    print(f"  KS distance of the interior cloud to the limit density: {ks:.4f}")

# a coarse text histogram of the PQP interior against the limit density
emp = empirical_catalog_measure(pair, PQP)
law = minimizer_for(PQP, alpha, beta)
edges = np.linspace(*law.support[0], 13)
counts, _ = np.histogram(emp.cloud, edges)
mids = 0.5 * (edges[1:] + edges[:-1])
expected = law.pdf(mids) / law.continuous_mass * emp.cloud.size * np.diff(edges)
print("\n   x      sampled  predicted")
for x, c, e in zip(mids, counts, expected):
    print(f"  {x:.3f}  {c:7d}  {e:9.1f}  " + "#" * int(c))
