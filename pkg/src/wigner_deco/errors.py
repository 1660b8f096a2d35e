"""Exception hierarchy.

Two families matter to callers: :class:`ValidationFailure` means the input
(configuration, parameters, or a precondition) was rejected before any real
work happened, while :class:`ContractViolation` means a computation finished
but one of its guaranteed numerical properties did not hold.  The CLI maps
the former to exit code 1 and the latter to exit code 2.
"""


class WignerDecoError(Exception):
    """Base class for all package errors."""


class ValidationFailure(WignerDecoError):
    """Bad input or violated precondition; nothing was computed."""


class ContractViolation(WignerDecoError):
    """A computed result failed one of its guaranteed invariants."""


# -- validation family ------------------------------------------------------

class ConfigError(ValidationFailure):
    """Malformed or unknown configuration content."""


class GridResolutionError(ValidationFailure):
    """State parameters outside the band the grid can resolve."""


class LeakageError(ValidationFailure):
    """Non-negligible amplitude at the grid edges (wrap-around risk)."""


class GridMismatchError(ValidationFailure):
    """Operands live on different position grids."""


class WeightError(ValidationFailure):
    """Mixture weights are negative or do not sum to one."""


class StateError(ValidationFailure):
    """A state array violates its structural invariants."""


class PSDError(ValidationFailure):
    """Covariance matrix is not positive semidefinite."""


class KernelTooWideError(ValidationFailure):
    """Smoothing kernel support does not fit the grid."""


class SupportError(ValidationFailure):
    """Transported or rescaled field support would wrap around the grid."""


class StabilityError(ValidationFailure):
    """Finite-difference step size violates the stability bounds."""


class StepSizeError(ValidationFailure):
    """Propagator step size or sample count outside the admissible range."""


class NegativeTimeError(ValidationFailure):
    """Evolution time must be non-negative."""


class BracketError(ValidationFailure):
    """Bisection bracket could not be established."""


# -- contract family --------------------------------------------------------

class NormalizationError(ContractViolation):
    """A phase-space field failed its unit-normalization contract."""


class RealityError(ContractViolation):
    """Imaginary residue of a transform exceeded its tolerance."""


class NeverPositiveError(ContractViolation):
    """Positivity scan found no non-negative time up to t_max."""
