"""Exception hierarchy shared by all modules."""

from __future__ import annotations


class SiegelCRError(Exception):
    """Base class for every error raised by the package."""


class DimensionError(SiegelCRError, ValueError):
    """Operands live in spaces of different dimension."""


class ParseError(SiegelCRError, ValueError):
    """Malformed serialized input (bad JSON shape, bad rational string)."""


class ValidationError(SiegelCRError, ValueError):
    """Input parsed but violates a documented invariant."""


class BoundaryError(ValidationError):
    """A point that must lie on the boundary rho = 0 does not."""


class TruncationError(SiegelCRError, ValueError):
    """Truncation order too low to decide the requested coefficients."""


class IntegrableCaseError(SiegelCRError, ValueError):
    """The input falls in the integrable regime, which is handled classically."""


class AutomorphismError(ValidationError):
    """Automorphism data violates one of the group invariants.

    ``failures`` lists the identities that failed, as human readable strings.
    """

    def __init__(self, message: str, failures: list[str] | None = None):
        super().__init__(message)
        self.failures = list(failures or [])


class ConstraintViolation(SiegelCRError):
    """A jet constraint failed; ``trace`` holds the partial verification trace."""

    def __init__(self, message: str, trace):
        super().__init__(message)
        self.trace = trace
