"""Exception types shared across the package."""

from __future__ import annotations

from typing import Any


class TelescoperError(Exception):
    """Base class for all errors raised by this package."""


class ParseError(TelescoperError):
    """Malformed expression or operator text."""

    def __init__(self, message: str, line: int, column: int) -> None:
        super().__init__(f"line {line}, column {column}: {message}")
        self.message = message
        self.line = line
        self.column = column


class DenominatorVanishes(TelescoperError):
    """A specialization made some denominator zero."""


class DivisionByZero(TelescoperError):
    pass


class VariableMismatch(TelescoperError):
    """Operands live in different rings or use different derivations."""


class UnsupportedOperation(TelescoperError):
    pass


class InconsistentSystem(TelescoperError):
    """A rectangular system whose derivations do not commute on its basis."""


class DirectSumRequired(TelescoperError):
    """Operands are represented in incompatible systems."""


class GeneratorOutOfScope(TelescoperError):
    """An operator uses a generator outside the allowed set."""


class Nonclosed(TelescoperError):
    pass


class PreconditionViolated(TelescoperError):
    pass


class AnsatzCeiling(TelescoperError):
    """The annihilator search reached its degree ceiling or size guard."""

    def __init__(self, message: str, diagnostics: dict[str, Any]) -> None:
        super().__init__(message)
        self.diagnostics = diagnostics


class BoundExceeded(TelescoperError):
    pass


class EmptyGrid(TelescoperError):
    pass


class NoSolutionInBound(TelescoperError):
    pass


class CertificateMismatch(TelescoperError):
    pass
