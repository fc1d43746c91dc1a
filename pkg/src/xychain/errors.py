"""Exception types shared across the package."""


class NumericalIntegrityError(ArithmeticError):
    """A computed quantity violates a physical bound beyond rounding slack.

    This always signals an upstream bug (wrong grid, wrong angle branch, ...)
    rather than bad user input.
    """


class ConfigError(ValueError):
    """Malformed or out-of-domain run configuration."""
