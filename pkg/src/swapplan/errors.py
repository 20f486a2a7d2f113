"""Exception hierarchy shared across the package."""

from __future__ import annotations


class SwapPlanError(Exception):
    """Base class for every error raised by swapplan."""


class ValidationError(SwapPlanError, ValueError):
    """A scenario or parameter set violates a model invariant.

    ``problems`` holds one ``(field, message)`` pair per failed check so callers
    can report all of them at once.
    """

    def __init__(self, problems):
        if isinstance(problems, str):
            problems = [("", problems)]
        self.problems = list(problems)
        text = "; ".join(f"{f}: {m}" if f else m for f, m in self.problems)
        super().__init__(text)


class InvalidParams(ValidationError):
    pass


class InvalidGeoPoint(ValidationError):
    pass


class InvalidAxes(ValidationError):
    pass


class DimensionMismatch(SwapPlanError, ValueError):
    pass


class NonPositiveSpeed(SwapPlanError, ValueError):
    pass


class NonPositiveFlightTime(SwapPlanError, ValueError):
    pass


class SoCError(SwapPlanError, ValueError):
    """State of charge left the [0, 1] interval."""


class IllegalTransition(SwapPlanError):
    pass


class ParseError(SwapPlanError, ValueError):
    pass


class UnsupportedVersion(ParseError):
    pass


class NoWaypoints(ParseError):
    pass


class ScheduleConflict(SwapPlanError):
    """Tried to reserve a window that overlaps an existing reservation."""


class Infeasible(SwapPlanError):
    """No set of replacement actions lets every UAV finish its mission."""


class SearchTimeout(SwapPlanError):
    """The planner exceeded its wall-clock budget."""

    def __init__(self, message, stats=None):
        super().__init__(message)
        self.stats = stats


class PlanViolation(SwapPlanError):
    """Replaying a plan broke a constraint; points at a planner bug or a corrupted plan."""
