"""Exception hierarchy for the bentcable package."""


class BentCableError(Exception):
    """Base class for all bentcable errors."""


class ParameterDomainError(BentCableError, ValueError):
    """A distribution or model parameter is outside its admissible domain."""


class NonIntegrableThresholdError(BentCableError):
    """The threshold distribution has no finite mean, so expectation-based
    constructions (and hence any valid smooth approximation) do not exist."""


class RouteError(BentCableError):
    """The requested operation is not defined for the family's construction
    route (e.g. asking for a transitional function of a hyperbolic-only
    family)."""


class RemovableSingularityError(BentCableError, ZeroDivisionError):
    """The hyperbolic factor was evaluated at its removable singularity.

    The product (x - tau) * hyp(x - tau) is continuous there; callers that
    need model values should use ``smooth_max`` instead.
    """


class ZoneOverlapError(BentCableError, ValueError):
    """Adjacent transition zones of a multi-phase model overlap."""


class SingularDesignError(BentCableError):
    """The regression design matrix is rank deficient (condition number
    above 1e12 under the rank-revealing SVD)."""


class InsufficientDataError(BentCableError, ValueError):
    """Too few observations for the requested model."""


class InsufficientReplicationError(BentCableError):
    """The lack-of-fit test needs replicated x values (n > g)."""


class OptimizationFailureError(BentCableError):
    """A fit that should dominate a nested fit scored worse; the optimizer
    did not converge."""


class DatasetMismatchError(BentCableError, ValueError):
    """Fit results being combined were computed on different datasets."""


class FitFailureError(BentCableError):
    """Every candidate in the search population produced a singular design."""


class InputFormatError(BentCableError, ValueError):
    """A data file could not be parsed.

    Attributes
    ----------
    line : int or None
        1-based line number of the offending record, when known.
    """

    def __init__(self, message, line=None):
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
        self.line = line
