"""Exception types shared across the package."""


class UniDelayError(Exception):
    """Base class for all errors raised by unidelay."""


class NoConvergence(UniDelayError):
    """An iterative numerical procedure exhausted its budget.

    For root searches this usually means the search rectangle should be
    widened by the caller.
    """


class UnsupportedRegime(UniDelayError):
    """The requested quantity is not defined for this drift coefficient."""


class InvalidGrid(UniDelayError):
    """Step size does not divide the unit delay or the horizon exactly."""


class DegenerateDenominator(UniDelayError):
    """The observed information integral of a path is not positive."""


class KernelTooShort(UniDelayError):
    """A convolution kernel does not cover the requested time points."""


class MissingIncrements(UniDelayError):
    """The operation needs the retained Brownian increments of a path."""


class EmptySample(UniDelayError):
    """A sample statistic was requested on an empty sample."""


class NonpositiveInformation(UniDelayError):
    """A Gaussian limit law needs a strictly positive information value."""


class InvalidPhase(UniDelayError):
    """The phase parameter lies outside one period."""
