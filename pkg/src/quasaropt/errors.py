"""Exception types shared across the package."""


class QuasarOptError(Exception):
    """Base class for all package errors."""


class InvalidArgumentError(QuasarOptError, ValueError):
    """A precondition on an argument was violated."""


class DimensionMismatchError(InvalidArgumentError):
    """Binary vector operation on vectors of unequal dimension."""


class SearchFailureError(QuasarOptError, RuntimeError):
    """Bisearch hit its iteration cap; usually a wrong smoothness constant.

    Carries the best momentum weight found so far in ``best_tau``.
    """

    def __init__(self, message, best_tau):
        super().__init__(message)
        self.best_tau = best_tau


class DivergenceError(QuasarOptError, RuntimeError):
    """The objective blew up or became non-finite during a run.

    ``trace`` holds the partial iteration trace collected before the abort.
    """

    def __init__(self, message, trace=None):
        super().__init__(message)
        self.trace = trace


class GenerationError(QuasarOptError, RuntimeError):
    """Rejection sampling exhausted its budget while generating an instance."""


class ParseError(QuasarOptError, ValueError):
    """Malformed dataset or config file; message includes the location."""
