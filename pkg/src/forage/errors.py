"""Exception hierarchy shared across the package."""

from __future__ import annotations


class ForageError(Exception):
    """Base class for all package errors."""


class InvalidGraph(ForageError):
    pass


class DisconnectedGraph(InvalidGraph):
    pass


class BipartiteGraph(InvalidGraph):
    pass


class AdjacentGoals(InvalidGraph):
    """Source and target are closer than two hops."""


class DimensionMismatch(ForageError, ValueError):
    pass


class InvalidEpsilon(ForageError, ValueError):
    pass


class NoConvergence(ForageError):
    pass


class MissingCoords(ForageError):
    pass


class ConfigError(ForageError):
    pass


class ParseError(ConfigError):
    def __init__(self, message: str, line: int | None = None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)


class RangeError(ConfigError):
    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")
