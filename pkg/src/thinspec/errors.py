"""Exception types shared across the package."""


class ThinspecError(Exception):
    """Base class for all thinspec errors."""


class ParameterError(ThinspecError):
    """Invalid model parameters, grid, or configuration."""


class ValidityError(ThinspecError):
    """Requested regime violates the truncated collective-sector description."""


class ConvergenceError(ThinspecError):
    """An eigensolver failed to converge."""


class ThresholdNotReached(ThinspecError):
    """The coherence magnitude never fell below the requested threshold."""

    def __init__(self, message, min_abs, t_end):
        super().__init__(message)
        self.min_abs = float(min_abs)
        self.t_end = float(t_end)


class SweepError(ThinspecError):
    """A sweep grid point could not produce a coherence time."""

    def __init__(self, message, axis, value):
        super().__init__(message)
        self.axis = axis
        self.value = value
