"""Exception and warning types raised by the package."""


class EnsembleBoundsError(ValueError):
    """Base class for all validation errors."""


class DomainError(EnsembleBoundsError):
    pass


class ConfidenceOutOfRange(DomainError):
    pass


class MassNotNormalized(EnsembleBoundsError):
    pass


class EmptySupport(EnsembleBoundsError):
    pass


class PointNotInSupport(EnsembleBoundsError):
    pass


class MassExceedsAvailable(EnsembleBoundsError):
    pass


class InfeasibleProfile(EnsembleBoundsError):
    """(accuracy, information) pair lies outside the admissible envelope."""


class EmptyEnsemble(EnsembleBoundsError):
    pass


class TargetUnreachable(EnsembleBoundsError):
    """Planner could not reach the target within ``k_max`` members."""

    def __init__(self, message, *, k_max, achieved):
        super().__init__(message)
        self.k_max = k_max
        self.achieved = achieved


class DegenerateAccuracy(UserWarning):
    """Construction collapsed to a point mass because accuracy is 0.5 or 1."""
