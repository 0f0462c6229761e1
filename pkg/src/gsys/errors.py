"""Domain exceptions and their CLI exit codes."""

from __future__ import annotations

from typing import Any

EXIT_OK = 0
EXIT_VALIDATION = 2
EXIT_VIOLATION = 3
EXIT_CAP = 4


class GSysError(Exception):
    """Base for every error raised by gsys."""

    exit_code = 1


class ValidationError(GSysError, ValueError):
    """Malformed input: bad index, wrong dimension, unparsable text."""

    exit_code = EXIT_VALIDATION


class IndexOutOfRange(ValidationError, IndexError):
    pass


class NotSkewSymmetrizable(ValidationError):
    pass


class SingularBasis(ValidationError):
    pass


class PreconditionError(ValidationError):
    pass


class NotDivisible(GSysError, ArithmeticError):
    pass


class InternalLaurentFailure(GSysError, RuntimeError):
    """Seed mutation left the Laurent ring."""

    exit_code = EXIT_VIOLATION


class SingularPoint(GSysError, ZeroDivisionError):
    pass


class TheoremViolation(GSysError, AssertionError):
    """A computed object contradicts a statement that must hold for valid input."""

    exit_code = EXIT_VIOLATION

    def __init__(self, message: str, *, witness: Any = None) -> None:
        super().__init__(message)
        self.witness = witness


class AxiomViolation(TheoremViolation):
    pass


class PostconditionViolation(TheoremViolation):
    pass


class ColumnNotFound(TheoremViolation):
    pass


class NoCandidate(TheoremViolation):
    pass


class NoPath(TheoremViolation):
    pass


class CapExceeded(GSysError, RuntimeError):
    """Enumeration stopped at a node or depth cap before closing."""

    exit_code = EXIT_CAP

    def __init__(self, message: str, *, partial: Any = None) -> None:
        super().__init__(message)
        self.partial = partial


def exit_code_for(exc: BaseException) -> int:
    if isinstance(exc, GSysError):
        return exc.exit_code
    if isinstance(exc, (ValueError, KeyError, IndexError)):
        return EXIT_VALIDATION
    return 1
