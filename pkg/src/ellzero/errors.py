"""Shared exception types for the ellzero package."""


class EllzeroError(Exception):
    """Base class for all package-specific errors."""


class DomainError(EllzeroError, ValueError):
    """An argument lies outside the mathematical domain of the operation."""


class SingularityError(DomainError):
    """Evaluation was requested at a singular parameter configuration."""


class DegenerateMuError(DomainError):
    """The third-kind parameter function violates a nondegeneracy condition."""


class StructuralError(EllzeroError):
    """An internal structural invariant of a symbolic computation failed."""


class VerificationError(EllzeroError):
    """A computed result violated a bound or identity it is required to satisfy."""


class QuadratureError(EllzeroError):
    """Numeric integration failed to converge to the requested accuracy."""
