"""Exception hierarchy shared by every module of the package."""


class BSimplexError(Exception):
    """Base class for all package errors."""


class DomainError(BSimplexError, ValueError):
    """An argument lies outside the domain of the operation."""


class NumericError(BSimplexError, ArithmeticError):
    """A numerical procedure failed (overflow, impossible intermediate value)."""


class AccuracyError(NumericError):
    """A series or quadrature did not reach its accuracy target."""


class EstimationError(BSimplexError, RuntimeError):
    """Estimation cannot proceed (too few or degenerate observations)."""


class ParseError(BSimplexError, ValueError):
    """An input file is malformed."""
