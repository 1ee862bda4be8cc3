"""Exception types shared across the package."""


class DomainError(ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class ResourceError(RuntimeError):
    """A size cap or iteration budget was exceeded.

    ``estimate`` and ``error_bound`` carry the best result reached before
    giving up, when one exists.
    """

    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message)
        self.estimate = estimate
        self.error_bound = error_bound


class ParseError(ValueError):
    """Malformed input file or configuration.

    ``lineno`` is set for line-oriented formats; ``violations`` lists
    ``(json_pointer, message)`` pairs for config validation.
    """

    def __init__(self, message, lineno=None, violations=None):
        super().__init__(message)
        self.lineno = lineno
        self.violations = list(violations or [])
