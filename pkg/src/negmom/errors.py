"""Exception hierarchy shared by every module."""

from __future__ import annotations


class NegMomError(Exception):
    """Base class for all library errors."""


class DomainError(NegMomError, ValueError):
    """An argument lies outside the operation's domain."""


class PoleError(DomainError):
    """Evaluation requested at the pole s = 1."""


class PrecisionError(NegMomError):
    """Requested accuracy is not reachable in double precision.

    ``best_effort`` carries whatever value could be computed.
    """

    def __init__(self, message: str, best_effort=None):
        super().__init__(message)
        self.best_effort = best_effort


class NearZeroError(NegMomError):
    """|zeta(s)| cannot be distinguished from zero at the requested precision."""


class ConvergenceError(NegMomError):
    """A series needs more terms than the hard cap allows."""


class InternalConsistencyError(NegMomError):
    """A construction-time invariant failed. Indicates a bug or a broken formula."""


class ConstraintError(NegMomError):
    """A displayed parameter constraint is violated; ``constraint`` names it."""

    def __init__(self, message: str, constraint: str | None = None):
        super().__init__(message)
        self.constraint = constraint


class DegenerateScheduleError(ConstraintError):
    """No ladder with K >= 1 fits under the cap."""


class UnsupportedRegimeError(NegMomError):
    """A predictor is asked for a regime where it makes no claim."""


class BudgetError(NegMomError):
    """A refinement, memory or work budget was exhausted.

    ``partial`` carries the partial result when one exists.
    """

    def __init__(self, message: str, partial=None):
        super().__init__(message)
        self.partial = partial
