"""Exception taxonomy shared across the package."""


class AttnProfError(Exception):
    """Base class for all errors raised by this package."""


class ShapeError(AttnProfError):
    """Operand shapes are incompatible with the requested kernel."""


class ConfigError(AttnProfError):
    """A model or sweep configuration is invalid."""


class InstrumentationError(AttnProfError):
    """Timer regions were opened/closed out of order or left dangling."""


class NumericalError(AttnProfError):
    """An iterative numeric procedure diverged."""


class TooShortInputError(AttnProfError):
    """Input is shorter than the receptive field of the featurizer."""


class MemoryBudgetExceeded(AttnProfError):
    """An allocation pushed live bytes past the configured budget."""

    def __init__(self, requested: int, current: int, budget: int):
        super().__init__(
            f"allocation of {requested} bytes exceeds budget "
            f"({current} live of {budget} allowed)"
        )
        self.requested = requested
        self.current = current
        self.budget = budget


class BudgetTooSmallError(AttnProfError):
    """The memory budget cannot fit even a batch of one."""


class EstimatorDegenerateError(AttnProfError):
    """The two-point batch-size estimator got a non-increasing memory sample."""


class GridMismatchError(AttnProfError):
    """Two curves to be compared were sampled on different grids."""


class MeasurementError(AttnProfError):
    """A measurement could not be carried out."""
