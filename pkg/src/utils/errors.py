"""
Lab Errors
Exception hierarchy shared by the library and the command-line front end
"""

from typing import Sequence, Tuple


class LabError(Exception):
    """Base class for every error raised by the lab"""


class InvalidArgumentError(LabError, ValueError):
    """An argument violates the contract of the operation it was passed to"""


class InvalidSpecError(InvalidArgumentError):
    """An experiment spec cannot be realized on the requested grid"""


class ConvolutionSupportError(LabError):
    """A truncated convolution would discard non-negligible mass"""

    def __init__(self, discarded_fraction: float):
        self.discarded_fraction = discarded_fraction
        super().__init__(
            f"convolution output does not fit the target grid: "
            f"{discarded_fraction:.3e} of its mass falls outside"
        )


class NoContractionError(LabError):
    """Picard iteration failed to contract within the iteration budget"""

    def __init__(self, residuals: Sequence[float], iterations: int, T: float):
        self.residuals: Tuple[float, ...] = tuple(float(r) for r in residuals)
        self.iterations = iterations
        self.T = T
        shown = ", ".join(f"{r:.3e}" for r in self.residuals)
        super().__init__(
            f"no contraction on [0, {T:g}] after {iterations} iteration(s); "
            f"last residuals: {shown}"
        )


class StepInstabilityError(LabError):
    """The time-stepping oracle detected runaway growth"""

    def __init__(self, time: float, growth: float):
        self.time = time
        self.growth = growth
        super().__init__(f"step oracle unstable at t={time:.6g}: norm grew by {growth:.3e}")


class ConfigError(LabError):
    """Configuration file or flag values are malformed"""
