"""Exception hierarchy shared by every module."""


class FalsifiabilityError(Exception):
    """Base class for all errors raised by this package."""


class InputError(FalsifiabilityError, ValueError):
    """An argument violates a documented precondition."""


class CapacityError(FalsifiabilityError):
    """An exact enumeration would exceed its configured ceiling.

    ``limit`` names the ceiling so callers (and the CLI) can report it.
    """

    def __init__(self, limit: str, value, maximum):
        self.limit = limit
        self.value = value
        self.maximum = maximum
        super().__init__(f"{limit}={value} exceeds ceiling {maximum}")


class DomainError(FalsifiabilityError, ValueError):
    """Argument outside the mathematical domain of a function (e.g. log of 0)."""


class UndefinedPosteriorError(FalsifiabilityError, ValueError):
    """The observed output has zero induced probability."""


class UndefinedGainError(UndefinedPosteriorError):
    """Information gain requested for an output outside the induced support."""


class InfiniteDivergenceError(FalsifiabilityError, ValueError):
    """KL divergence is infinite: p puts mass where q has none."""


class UnpredictableHistoryError(FalsifiabilityError, ValueError):
    """Solomonoff prediction requested for a history with zero prior mass."""
