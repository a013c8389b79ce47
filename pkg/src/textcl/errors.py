"""Exception hierarchy shared across the package.

The CLI maps these onto exit codes: ConfigError -> 1, DataError -> 2,
NumericError -> 3.
"""


class TextclError(Exception):
    """Base class for all package errors."""


class ConfigError(TextclError):
    """Invalid hyperparameter or option combination."""


class DataError(TextclError):
    """Malformed or inconsistent input data / files."""


class NumericError(TextclError):
    """Non-finite value encountered during computation."""
