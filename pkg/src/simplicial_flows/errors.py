"""Exception types shared across the package."""


class SimplicialError(Exception):
    """Base class for all package errors."""


class ComplexError(SimplicialError, ValueError):
    """Malformed complex description or unknown simplex."""


class DimensionError(SimplicialError, ValueError):
    """Dimension out of range or arity mismatch."""


class PreconditionError(SimplicialError, ValueError):
    """A theorem's hypotheses are not met by the supplied input."""


class VerificationError(SimplicialError):
    """A numerical check of a proven identity failed."""


class GuardExceeded(SimplicialError):
    """Input is too large for exhaustive desk-scale computation."""
