"""Exception types shared across the library."""


class DomainError(ValueError):
    """An argument is outside the mathematical domain of the operation."""


class InvalidMapError(DomainError):
    """The homogeneous pair does not define a rational map (zero resultant)."""


class NumericError(RuntimeError):
    """An iterative method failed to reach the requested tolerance.

    Carries the best value obtained so it can be reported rather than lost.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class ResourceError(RuntimeError):
    """A configured resource budget (digits, enumeration size) was exceeded."""

    def __init__(self, message, attained=None):
        super().__init__(message)
        self.attained = attained
