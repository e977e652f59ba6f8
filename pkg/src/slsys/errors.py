"""Exception hierarchy for slsys.

Every failure mode surfaced by the library maps to one of these classes so
callers (and the CLI) can translate them into exit codes uniformly.
"""


class SlsysError(Exception):
    """Base class for all slsys errors."""


class InputError(SlsysError):
    """Malformed input: bad grids, duplicate points, unparsable files."""


class DomainError(SlsysError):
    """Evaluation requested outside the mathematical domain (cut, spectrum, ...)."""


class EvaluationError(SlsysError):
    """An evaluator failed at a specific point."""

    def __init__(self, point, message=""):
        self.point = point
        super().__init__(f"evaluation failed at {point!r}" + (f": {message}" if message else ""))


class ClassError(SlsysError):
    """A function failed the membership screening required by an operation."""


class NoLimitError(SlsysError):
    """A real-axis limit did not converge (oscillation or noise floor)."""


class AccuracyError(SlsysError):
    """A quadrature/extrapolation finished without reaching the target accuracy."""

    def __init__(self, message, achieved=None):
        self.achieved = achieved
        super().__init__(message)


class IntegrationError(SlsysError):
    """ODE integration failed (step underflow / step budget exhausted)."""

    def __init__(self, message, x_reached=None):
        self.x_reached = x_reached
        super().__init__(message)


class ConvergenceError(SlsysError):
    """Iterative refinement (e.g. in the right-endpoint ladder) did not settle."""

    def __init__(self, message, last_iterates=()):
        self.last_iterates = tuple(last_iterates)
        super().__init__(message)


class PoleError(DomainError):
    """A genuine pole of the evaluated function was hit; never smoothed over."""


class SingularRelationError(DomainError):
    """The transfer/impedance relation is singular at the given value (W = -1)."""


class NotAccretiveError(DomainError):
    """Boundary parameter violates accretivity: Re h < -m(-0)."""


class InternalConsistencyError(SlsysError):
    """An internal cross-check failed (Hermiticity defect, sign audit, ...)."""
