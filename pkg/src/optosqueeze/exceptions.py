"""Exception hierarchy for optosqueeze.

Numerical failures derive from ArithmeticError and invalid inputs from
ValueError, so callers can catch either the package base class or the
standard category.
"""


class OptoSqueezeError(Exception):
    """Base class for all optosqueeze errors."""


class IntegrationDiverged(OptoSqueezeError, ArithmeticError):
    """Covariance integration overflowed the guard or the step control failed."""


class GainOverflow(OptoSqueezeError, ArithmeticError):
    """An analytic propagator grew beyond the overflow guard."""


class OutOfDomain(OptoSqueezeError, ValueError):
    """A profile was evaluated outside [0, tau]."""


class DegenerateProfile(OptoSqueezeError, ValueError):
    """A profile with zero square-integral cannot be normalized."""


class NonPositiveArgument(OptoSqueezeError, ValueError):
    """An argument that must be strictly positive was not."""


class NotSymmetric(OptoSqueezeError, ValueError):
    """A covariance matrix is not symmetric within tolerance."""


class NonPositiveEigenvalue(OptoSqueezeError, ValueError):
    """A minimal eigenvalue is zero or negative (unphysical state)."""


class IllConditioned(OptoSqueezeError, ArithmeticError):
    """The Gram matrix stayed indefinite after jitter escalation."""


class EvaluationFailed(OptoSqueezeError):
    """An objective evaluation could not produce a value.

    Attributes:
        vector: The optimization vector that failed, if known.
    """

    def __init__(self, message: str, vector: list[float] | None = None):
        super().__init__(message)
        self.vector = vector


class ConfigError(OptoSqueezeError, ValueError):
    """An experiment configuration is invalid or incomplete."""


class RecordVersionError(OptoSqueezeError, ValueError):
    """A persisted record has an unsupported schema version."""


__all__ = [
    "OptoSqueezeError",
    "IntegrationDiverged",
    "GainOverflow",
    "OutOfDomain",
    "DegenerateProfile",
    "NonPositiveArgument",
    "NotSymmetric",
    "NonPositiveEigenvalue",
    "IllConditioned",
    "EvaluationFailed",
    "ConfigError",
    "RecordVersionError",
]
