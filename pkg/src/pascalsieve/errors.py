"""Shared exception types."""


class BadPrimeError(ValueError):
    """The prime divides the discriminant data of the curve model."""


class BadReductionError(ValueError):
    """A rational point has a denominator divisible by the reduction prime."""


class ResourceLimitError(RuntimeError):
    """A configured size or cost ceiling was exceeded."""


class GrowthError(ResourceLimitError):
    """Survivor set exceeded its ceiling while consuming a prime."""

    def __init__(self, p: int, size: int, ceiling: int):
        super().__init__(
            f"survivor set grew to {size} (> ceiling {ceiling}) at prime {p}"
        )
        self.p = p
        self.size = size
        self.ceiling = ceiling


class ConfigError(ValueError):
    """Malformed or inconsistent instance configuration."""


class SkipPrime(Exception):
    """This prime cannot contribute local data (bad reduction or bad denominator)."""

    def __init__(self, p: int, reason: str):
        super().__init__(f"p={p}: {reason}")
        self.p = p
        self.reason = reason
