"""Exception types shared across the library."""


class BigramLabError(Exception):
    """Base class for all library errors."""


class DomainError(BigramLabError, ValueError):
    """An argument is outside the mathematical domain of an operation."""


class SizeError(BigramLabError, ValueError):
    """A problem size exceeds the cap for dense oracle computations."""


class FormatError(BigramLabError, ValueError):
    """A file or token stream does not conform to its expected format."""


class ConfigError(BigramLabError, ValueError):
    """An experiment configuration is invalid."""
