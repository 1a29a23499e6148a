"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the domain of the requested operation."""


class AccuracyError(ArithmeticError):
    """A numerical method failed to reach its requested accuracy.

    The best available estimate is attached so callers can decide
    whether it is still usable.
    """

    def __init__(self, message, value=None, error=None):
        super().__init__(message)
        self.value = value
        self.error = error
