"""Random pairs of projections: sampling, spectra, limit laws and rate functions."""

from .ensembles import (
    ProjectionPair,
    SpectrumParams,
    canonical_pair,
    sample_jacobi,
    sample_pair,
    selberg_log_z,
    spectrum_params,
    two_by_two_pair,
)
from .errors import (
    DimensionError,
    ExtractionError,
    NumericError,
    ParameterError,
    ShapeError,
    TwoProjError,
    UnsupportedFunctionError,
)
from .harness import VerificationReport, ks_distance, run_suite
from .limits import LimitLaw, free_edges, minimizer_for, minimizer_pqp, quantile_cloud
from .linalg import haar_unitary, hermitian_eigs, is_hermitian, is_projection, is_unitary
from .rate import (
    RateParams,
    b_function,
    free_entropy,
    log_energy,
    rate_contracted,
    rate_params,
    rate_tilde,
    rate_ts,
)
from .rng import RngStream, streams
from .spectra import (
    ANTICOMMUTATOR,
    PQP,
    UNITARY_PRODUCT,
    CatalogFunction,
    SpectralMeasure,
    Tag,
    apply_catalog,
    catalog_spectrum,
    empirical_catalog_measure,
    linear,
    word_moment,
)
from .tracial import TracialState, free_state, freeness_atoms, from_pair, generator_traces, psi_map, pushforward

__version__ = "0.1.0"

__all__ = [
    "ProjectionPair",
    "SpectrumParams",
    "canonical_pair",
    "sample_jacobi",
    "sample_pair",
    "selberg_log_z",
    "spectrum_params",
    "two_by_two_pair",
    "DimensionError",
    "ExtractionError",
    "NumericError",
    "ParameterError",
    "ShapeError",
    "TwoProjError",
    "UnsupportedFunctionError",
    "VerificationReport",
    "ks_distance",
    "run_suite",
    "LimitLaw",
    "free_edges",
    "minimizer_for",
    "minimizer_pqp",
    "quantile_cloud",
    "haar_unitary",
    "hermitian_eigs",
    "is_hermitian",
    "is_projection",
    "is_unitary",
    "RateParams",
    "b_function",
    "free_entropy",
    "log_energy",
    "rate_contracted",
    "rate_params",
    "rate_tilde",
    "rate_ts",
    "RngStream",
    "streams",
    "ANTICOMMUTATOR",
    "PQP",
    "UNITARY_PRODUCT",
    "CatalogFunction",
    "SpectralMeasure",
    "Tag",
    "apply_catalog",
    "catalog_spectrum",
    "empirical_catalog_measure",
    "linear",
    "word_moment",
    "TracialState",
    "free_state",
    "freeness_atoms",
    "from_pair",
    "generator_traces",
    "psi_map",
    "pushforward",
]
