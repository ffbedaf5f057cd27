"""Exception types shared across the package."""

from __future__ import annotations


class ShapeCIError(Exception):
    """Base class for all package errors."""


class NearSingular(ShapeCIError, ArithmeticError):
    """A matrix that must be positive definite is numerically singular."""


class ConvergenceError(ShapeCIError, ArithmeticError):
    """An iterative kernel hit its iteration cap."""


class IterationLimit(ShapeCIError, RuntimeError):
    """The simplex method exceeded its pivot budget."""


class WindowError(ShapeCIError, ValueError):
    """A point lies outside the support window of a sieve basis."""


class KinkError(ShapeCIError, ValueError):
    """The policy schedule has no slope change at the kink."""


class StepError(ShapeCIError):
    """Wraps a component failure with the pipeline step that raised it."""

    def __init__(self, step: str, cause: Exception):
        super().__init__(f"{step}: {cause}")
        self.step = step
        self.cause = cause
