"""Exception types shared across the package."""


class PdArrayError(Exception):
    """Base class for all errors raised by pdarray."""


class DomainError(PdArrayError, ValueError):
    """An argument lies outside the mathematical domain of an operation."""


class NumericalError(PdArrayError, ArithmeticError):
    """A numerical procedure failed to converge or would over/underflow."""


class ShapeError(PdArrayError, ValueError):
    """A PD count is not of the hexagonal form 1 + 3G(G+1)."""


class UnsupportedModelError(PdArrayError, ValueError):
    """The requested beam pattern has no model for this operation."""


class CapacityError(PdArrayError, ValueError):
    """A brute-force search was asked to enumerate too large a space."""


class CsvParseError(PdArrayError, ValueError):
    """Malformed CSV input; carries the offending line number."""

    def __init__(self, message, line=None):
        self.line = line
        if line is not None:
            message = f"line {line}: {message}"
        super().__init__(message)
