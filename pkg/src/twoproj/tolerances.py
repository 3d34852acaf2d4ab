"""Numerical tolerances shared across the package.

Every threshold used to decide a structural property, attribute an
eigenvalue to an atom, or match a measure decomposition lives here.
"""

#: residual bound for ``is_hermitian`` / ``is_unitary`` / ``is_projection``
STRUCTURE_TOL = 1e-10

#: bound on composite residuals such as ``||S M S - I||_F``
RESIDUAL_TOL = 1e-8

#: relative bound on ``||M - V diag(w) V*||_F / ||M||_F`` after a Hermitian eigensolve
EIG_RECON_TOL = 1e-9

#: smallest admissible eigenvalue of a PD matrix, relative to ``dim * ||M||``
PD_FLOOR = 1e-12

#: absolute window for attributing an eigenvalue to a declared atom
ATOM_TOL = 1e-8

#: pushed-forward cloud points closer than this to an atom are merged into it
ATOM_MERGE_TOL = 1e-12

#: cloud points this close to 0 or 1 make ``log x`` / ``log(1 - x)`` integrals diverge
EDGE_TOL = 1e-12

#: matching tolerance for atom masses and continuous mass in rate decompositions
MASS_TOL = 1e-9

#: pointwise tolerance for shape checks on clouds (symmetry, S/T consistency)
CLOUD_MATCH_TOL = 1e-8

#: default number of cloud points used to discretize continuous measures
DEFAULT_CLOUD_SIZE = 2000
