"""
Exception types raised by the DWPF engines and the command-line harness.

Every failure that the library can diagnose is raised as a subclass of
`DWPFError`, so callers (the CLI and the suite runner) can separate input
problems from genuine check failures and from programming errors.
"""


class DWPFError(Exception):
    """Base class for all errors raised by this package."""
    pass


class DimensionError(DWPFError, ValueError):
    """Raised when a matrix or operator has the wrong shape."""
    pass


class ShapeError(DWPFError, ValueError):
    """Raised when jets with different orders or expansion points are combined."""
    pass


class DomainError(DWPFError, ValueError):
    """Raised when parameters hit a singular locus (pole, collision, vanishing denominator)."""
    pass


class InvertibilityError(DomainError):
    """Raised when the factorizing F-matrix is singular or too badly conditioned."""
    pass


class DegeneratePointError(DomainError):
    """Raised when a tau function vanishes at the requested expansion point."""
    pass


class SizeError(DWPFError, ValueError):
    """Raised when a lattice size lies outside the supported range of a route."""
    pass


class SchemaError(DWPFError, ValueError):
    """Raised when a parameter document does not match the expected schema."""
    pass


class NumericalLimitError(DWPFError, ArithmeticError):
    """Raised when an extrapolated limit does not agree with its last sample."""
    pass


class GeneratorStuckError(DWPFError, RuntimeError):
    """Raised when random parameter generation keeps violating the separation rule."""
    pass


class UsageError(DWPFError, ValueError):
    """Raised for unknown suites, methods or malformed command-line arguments."""
    pass


__all__ = [
    "DWPFError",
    "DimensionError",
    "ShapeError",
    "DomainError",
    "InvertibilityError",
    "DegeneratePointError",
    "SizeError",
    "SchemaError",
    "NumericalLimitError",
    "GeneratorStuckError",
    "UsageError",
]
