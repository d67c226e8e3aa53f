"""Exception hierarchy shared by the library and the CLI."""


class UurError(Exception):
    """Base class for all errors raised by :mod:`uurel`."""


class InvariantError(UurError, ValueError):
    """An object violates one of its structural invariants."""


class DimensionMismatch(InvariantError):
    pass


class NormalizationError(InvariantError):
    """A probability vector could not be validated (invalid state or measurement)."""


class BudgetExceeded(UurError):
    """Exhaustive enumeration would exceed the configured evaluation budget."""

    def __init__(self, count, budget, what="norm evaluations"):
        self.count = count
        self.budget = budget
        super().__init__(
            f"enumeration needs {count} {what}, budget is {budget}; "
            "refusing to approximate (raise --budget to proceed)"
        )


class ConvergenceError(UurError):
    """No optimizer restart converged; ``best`` holds the best value seen."""

    def __init__(self, message, best=None):
        self.best = best
        super().__init__(message)


class ParseError(UurError):
    def __init__(self, message, location=None):
        self.location = location
        if location:
            message = f"{location}: {message}"
        super().__init__(message)
