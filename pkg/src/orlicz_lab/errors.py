"""Exception hierarchy shared by all modules."""


class OrliczLabError(Exception):
    """Base class for library errors."""


class DomainError(OrliczLabError, ValueError):
    """Argument outside the domain of an operation (e.g. negative t)."""


class ExtrapolationError(OrliczLabError, ValueError):
    """Query beyond the range covered by a tabulated function."""


class ConjugateRangeError(OrliczLabError, ValueError):
    """The supremum defining a conjugate is not attained in the search range.

    Attributes
    ----------
    t : float
        The offending abscissa.
    """

    def __init__(self, t, message=None):
        self.t = float(t)
        super().__init__(message or f"supremum not attained in range at t={self.t:g}")


class NumericError(OrliczLabError, ArithmeticError):
    """A computed quantity is non-finite or otherwise unusable."""


class ConditioningError(NumericError):
    """An unbounded multiplier produced non-finite output."""


class GridMismatchError(OrliczLabError, ValueError):
    """Operands live on different grids."""


class CostGuardError(OrliczLabError, RuntimeError):
    """A resource guard refused an oversized computation."""


class ConfigError(OrliczLabError, ValueError):
    """Invalid suite or CLI configuration."""
