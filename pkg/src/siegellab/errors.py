"""Exception hierarchy shared by all modules.

The CLI maps these onto exit codes: argument-type errors give 2,
truncation/resource errors give 3 and inconsistencies give 4.
"""


class SiegelError(Exception):
    """Base class for every error raised by siegellab."""


class ArgumentError(SiegelError, ValueError):
    """An argument is outside the documented domain of an operation."""


class DimensionError(ArgumentError):
    """Matrix shapes do not fit the operation."""


class DomainError(ArgumentError):
    """A point lies outside the domain (e.g. not in the Siegel disk)."""


class UnsupportedError(ArgumentError):
    """The request is well formed but beyond the supported range."""


class TruncationError(SiegelError):
    """A truncated expansion does not reach far enough.

    ``required_bound`` names the input trace bound that would suffice,
    when it is known.
    """

    def __init__(self, message, required_bound=None):
        super().__init__(message)
        self.required_bound = required_bound


class ResourceError(SiegelError):
    """An enumeration exceeded its node budget."""


class InconsistencyError(SiegelError, ArithmeticError):
    """A mathematical invariant failed to hold."""


class ConditioningError(InconsistencyError):
    """A floating point computation is too ill-conditioned to trust."""


class NotEigenformError(InconsistencyError):
    """Hecke images are not proportional to the input expansion."""
