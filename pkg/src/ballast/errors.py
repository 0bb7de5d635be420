"""Exception hierarchy shared across the package.

The CLI maps these onto process exit codes: ConfigError -> 2,
DataError -> 3, EmptyResultError -> 4.
"""


class BallastError(Exception):
    """Base class for all errors raised by this package."""


class ConfigError(BallastError):
    """Invalid configuration: bad weights, thresholds, patterns, unknown names."""


class DataError(BallastError):
    """Input data violates a precondition (unreadable, ragged, degenerate)."""


class EmptyResultError(BallastError):
    """An operation produced an empty result (e.g. pruning removed everything)."""
