"""Exception types shared across the package."""


class EllipticRmtError(Exception):
    """Base class for all package errors."""


class InvalidSpecError(EllipticRmtError):
    """A distribution, ensemble, or experiment parameter is out of range."""


class ShiftNormViolationError(InvalidSpecError):
    """A deterministic shift exceeds its declared operator-norm budget K*n^Q."""


class NumericalFailureError(EllipticRmtError):
    """An eigensolver or SVD failed to converge.

    Carries the seed of the offending matrix (when known) so the failure
    is replayable.
    """

    def __init__(self, message, seed=None):
        super().__init__(message if seed is None else f"{message} (seed={seed})")
        self.seed = seed


class InvalidVectorError(EllipticRmtError):
    """Input vector violates a precondition (not unit norm, not incompressible)."""


class DegenerateSubspaceError(EllipticRmtError):
    """Column span is rank deficient where full rank is required."""


class SingularMinorError(EllipticRmtError):
    """The principal minor used by the distance formula is singular."""


class InternalInvariantError(EllipticRmtError):
    """A guaranteed postcondition failed, indicating a bug in the extraction."""


class InsufficientDataError(EllipticRmtError):
    """Too few samples for a statistically meaningful estimate."""


class EnumerationLimitError(EllipticRmtError):
    """Discrete support too large for exact enumeration."""


class HypothesisViolatedError(EllipticRmtError):
    """Empirical data contradicts the hypothesis an experiment relies on."""


class PoleError(EllipticRmtError):
    """Logarithmic quantity evaluated at (or too close to) a singularity."""


class UnsupportedLawError(EllipticRmtError):
    """Limiting law parameters outside the supported range (|rho| >= 1)."""
