"""Exception types raised across the package."""

from __future__ import annotations


class RobustRepError(Exception):
    """Base class for all package-specific errors."""


class NonFiniteError(RobustRepError):
    """A matrix contains NaN or infinite entries."""


class NonFiniteIterateError(NonFiniteError):
    """A solver iterate became non-finite (divergence).

    Carries the partial :class:`~robustrep.solvers.SolveReport` built from
    the last finite iterate in ``report``.
    """

    def __init__(self, message: str, report=None):
        super().__init__(message)
        self.report = report


class ZeroMatrixError(RobustRepError):
    """Operation undefined for the all-zero matrix."""


class SingularSystemError(RobustRepError):
    """A shifted column system is numerically singular."""


class EmptyInputError(RobustRepError):
    """An operation received an empty input."""


class ParseError(RobustRepError):
    """A CSV token could not be parsed as a finite number."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"{message} (line {line}, column {column})")
        self.line = line
        self.column = column


class RaggedRowsError(RobustRepError):
    """CSV rows have inconsistent lengths."""

    def __init__(self, message: str, line: int):
        super().__init__(f"{message} (line {line})")
        self.line = line


class EmptyFileError(RobustRepError):
    """A matrix file contains no data."""
