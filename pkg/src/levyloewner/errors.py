"""Exception hierarchy shared across the package.

Exit-code mapping used by the CLI: config/usage problems -> 2, numerical
failures -> 3, statistical failures -> 4.
"""


class LevyLoewnerError(Exception):
    """Base class for all package errors."""

    exit_code = 1


class ConfigError(LevyLoewnerError):
    """Malformed configuration, bad parameter domain, or misuse of an API."""

    exit_code = 2


class NumericalError(LevyLoewnerError):
    """A numerical procedure failed to converge or underflowed."""

    exit_code = 3


class StatisticalError(LevyLoewnerError):
    """Not enough Monte Carlo signal to produce the requested estimate."""

    exit_code = 4
