"""Exception types shared across the package.

Every documented failure mode maps to one of these, and the command line
tool assigns each a distinct exit code (see cli.EXIT_CODES).
"""

from __future__ import annotations


class QubogatesError(Exception):
    """Base class for all package errors."""


class ParseError(QubogatesError):
    """Constraint or circuit text could not be parsed.

    Carries the offending line and column when known.
    """

    def __init__(self, message: str, line: int | None = None, column: int | None = None):
        self.line = line
        self.column = column
        where = ""
        if line is not None:
            where = f" (line {line}" + (f", column {column}" if column is not None else "") + ")"
        super().__init__(message + where)


class MissingVariableError(QubogatesError):
    """An assignment does not cover a variable the polynomial mentions."""

    def __init__(self, var):
        self.var = var
        super().__init__(f"assignment does not bind variable {var!r}")


class DuplicateNameError(QubogatesError):
    """Two distinct variables with the same name met in one polynomial."""


class DegreeError(QubogatesError):
    """A polynomial exceeds the degree an operation supports."""


class GapVerificationError(QubogatesError):
    """A candidate penalty failed exhaustive ground-state verification."""

    def __init__(self, message: str, report=None):
        self.report = report
        super().__init__(message)


class UnsatisfiableRelationError(QubogatesError):
    """A relation has no binary solutions where one was required."""


class InfeasibleBoundError(QubogatesError):
    """An inequality bound admits no binary assignment at all."""


class NormalizationError(QubogatesError):
    """A field pair is not normalized within tolerance."""


class SolverLimitError(QubogatesError):
    """Exhaustive enumeration was asked to exceed its variable limit."""


class NonUniqueGroundStateError(QubogatesError):
    """A pipeline stage needed a unique ground state and found several."""

    def __init__(self, message: str, minimizers=()):
        self.minimizers = tuple(minimizers)
        super().__init__(message)


class ExclusivityError(QubogatesError):
    """A gate variable leaked into another penalty within the same stage."""
