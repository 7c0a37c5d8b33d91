"""Exception types raised across the package."""


class AscendError(Exception):
    """Base class for all package errors."""


class DomainError(AscendError, ValueError):
    """A point lies outside the open domain of a coordinate function."""


class RangeError(AscendError, ValueError):
    """A slope value lies outside the derivative range of a coordinate function."""


class BracketError(AscendError, RuntimeError):
    """The root finder could neither bracket a root nor prove it absent."""


class ExistenceError(AscendError):
    """A root required at the first iteration does not exist.

    ``query`` is the 1-based index ``l`` of the missing little-theta root, or
    the string ``"big"`` for the root of the equality constraint.
    """

    def __init__(self, query, message=None):
        self.query = query
        if message is None:
            if query == "big":
                message = "root of the equality-constraint equation does not exist"
            else:
                message = f"root of the ascending-constraint equation for l={query} does not exist"
        super().__init__(message)


class InternalSolverError(AscendError, AssertionError):
    """An invariant guaranteed by the algorithm's correctness argument failed."""


class ValidationError(AscendError, ValueError):
    """An instance violates the modelling assumptions; carries the report."""

    def __init__(self, report):
        self.report = report
        lines = "; ".join(f"{rule}: {msg}" for rule, msg in report.violations)
        super().__init__(f"invalid instance: {lines}")


class ParseError(AscendError, ValueError):
    """Malformed instance or solution document."""


class TraceError(AscendError, ValueError):
    """A solver trace is inconsistent and multipliers cannot be built from it."""


class EmptyFeasible(AscendError, RuntimeError):
    """The oracle grid contains no feasible point."""


class LengthMismatch(AscendError, ValueError):
    """Two vectors that must have equal length do not."""
