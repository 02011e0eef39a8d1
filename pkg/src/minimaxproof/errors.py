"""Exception hierarchy shared by all modules."""


class MinimaxProofError(Exception):
    """Base class for every error raised by this package."""


class IndeterminateError(MinimaxProofError):
    """Raised for questions that have no answer for the given input (e.g. roots of 0)."""


class InvalidIntervalError(MinimaxProofError, ValueError):
    pass


class DomainError(MinimaxProofError, ValueError):
    """A function was evaluated outside its domain.

    ``node`` is the offending expression node when the error comes from the
    expression evaluator, else ``None``.
    """

    def __init__(self, message, node=None):
        super().__init__(message)
        self.node = node


class EvaluationError(MinimaxProofError):
    """A function returned a non-finite value where a finite one was required."""


class ConvergenceError(MinimaxProofError):
    """An iterative method stopped before meeting its tolerance.

    ``best`` carries the best iterate found so far.
    """

    def __init__(self, message, best=None):
        super().__init__(message)
        self.best = best


class QuadratureError(ConvergenceError):
    def __init__(self, message, estimate=None, error_bound=None):
        super().__init__(message, best=estimate)
        self.estimate = estimate
        self.error_bound = error_bound


class LimitError(MinimaxProofError):
    """An endpoint limit could not be established or is zero."""


class ParseError(MinimaxProofError, ValueError):
    """Syntax error in an expression or job file, with a character offset."""

    def __init__(self, message, position=None, line=None):
        self.position = position
        self.line = line
        where = ""
        if line is not None:
            where = f" (line {line}, column {position + 1 if position is not None else '?'})"
        elif position is not None:
            where = f" at offset {position}"
        super().__init__(message + where)
        self.message = message


class CertificateError(MinimaxProofError):
    """Structurally malformed certificate; ``path`` names the bad field."""

    def __init__(self, message, path=""):
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
