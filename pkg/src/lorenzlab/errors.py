"""Exception hierarchy shared by all toolkit modules."""

from __future__ import annotations


class ToolkitError(Exception):
    """Base class for all toolkit failures."""


class DomainError(ToolkitError):
    """Invalid argument: non-finite state, bad parameter, or out-of-contract input."""


class IntegrationError(ToolkitError):
    """Integration could not continue (step-size underflow or non-finite state).

    Carries the last accepted time and state so callers can report partial
    results.
    """

    def __init__(self, message: str, t_last: float, y_last: tuple[float, ...]):
        super().__init__(f"{message} (last good t={t_last:.6g})")
        self.t_last = t_last
        self.y_last = y_last


class BracketError(ToolkitError):
    """A bisection bracket does not straddle the sought sign change."""


class GeometryError(ToolkitError):
    """An orbit failed to reach the geometric object required by the operation."""


class ConvergenceError(ToolkitError):
    """Newton iteration failed to converge; carries the residual history."""

    def __init__(self, message: str, residuals: list[float]):
        super().__init__(message)
        self.residuals = residuals


class InsufficientDataError(ToolkitError):
    """Not enough samples were produced to evaluate the requested quantity."""
