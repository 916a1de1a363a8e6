"""Exception hierarchy for the bratteli package.

Validation errors carry enough structure (indices, offending values) that a
caller can point at the exact piece of a presentation that is broken.
"""


class BrattelError(Exception):
    """Base class for all errors raised by this package."""


class InvalidPresentation(BrattelError):
    """A presentation is structurally malformed (empty level, entry < 1, ...)."""


class DimensionMismatch(BrattelError):
    """Matrix/vector shapes do not chain."""


class NotEmbedding(BrattelError):
    """A matrix required to be an embedding matrix has an all-zero column."""

    def __init__(self, message: str, column: int):
        super().__init__(message)
        self.column = column


class MultiplicityViolation(BrattelError):
    """The multiplicity condition E.V <= W fails in some row."""

    def __init__(self, message: str, row: int):
        super().__init__(message)
        self.row = row


class OutOfRange(BrattelError):
    """A level index is not resolvable in a finite presentation."""


class SquareFails(BrattelError):
    """A commuting square of a premorphism window does not commute."""

    def __init__(self, message: str, n: int, lhs=None, rhs=None):
        super().__init__(message)
        self.n = n
        self.lhs = lhs
        self.rhs = rhs


class MonotonicityFails(BrattelError):
    """Premorphism target indices are not nondecreasing."""

    def __init__(self, message: str, n: int):
        super().__init__(message)
        self.n = n


class ComposabilityMismatch(BrattelError):
    """compose(g, f) requires target(f) == source(g)."""


class EmptyWindow(BrattelError):
    """A composition covers no level at all."""


class SourceTargetMismatch(BrattelError):
    """Equivalence checks require premorphisms with equal endpoints."""


class NotUhfShape(BrattelError):
    """Diagram is not a tower of full matrix algebras (scalar levels, exact ratios)."""


class OutOfWindow(BrattelError):
    """A class level is not covered by a premorphism window."""


class InvalidCertificate(BrattelError):
    """An intertwining certificate fails verification."""


class LimitExceeded(BrattelError):
    """A matrix exceeded the BD_MAX_CELLS safety cap."""


class ParseError(BrattelError):
    """DSL syntax or semantic error, with 1-based source position."""

    def __init__(self, message: str, line: int, column: int):
        super().__init__(f"line {line}, column {column}: {message}")
        self.line = line
        self.column = column
