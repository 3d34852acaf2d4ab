"""Exception types raised by twoproj."""


class TwoProjError(Exception):
    """Base class for all package errors."""


class DimensionError(TwoProjError, ValueError):
    """A matrix dimension is out of range (e.g. ``N = 0``)."""


class ParameterError(TwoProjError, ValueError):
    """A scalar parameter (rank, Jacobi exponent, tolerance, ...) is invalid."""


class ShapeError(TwoProjError, ValueError):
    """A matrix lacks a structural property the operation requires."""


class NumericError(TwoProjError, ArithmeticError):
    """A numerical routine failed; ``residual`` carries the offending size."""

    def __init__(self, message, residual=None):
        super().__init__(message)
        self.residual = residual


class ExtractionError(TwoProjError):
    """Eigenvalue bookkeeping of a projection pair is inconsistent."""

    def __init__(self, message, interior_count=None, expected_count=None):
        super().__init__(message)
        self.interior_count = interior_count
        self.expected_count = expected_count


class UnsupportedFunctionError(TwoProjError, ValueError):
    """The requested function of the pair is not in the implemented catalog."""
