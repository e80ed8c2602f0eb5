from __future__ import annotations


class ApproxError(Exception):
    """Base class for every error raised by bounded_approx."""


class ConfigError(ApproxError, ValueError):
    """Invalid configuration or operation parameters. `field` names the offender."""

    def __init__(self, message: str, *, field: str | None = None) -> None:
        super().__init__(message)
        self.field = field

    def __str__(self) -> str:
        msg = super().__str__()
        return f"{self.field}: {msg}" if self.field else msg


class GridTooCoarseError(ConfigError):
    pass


class WindowTooLargeError(ConfigError):
    pass


class WindowExceededError(ConfigError):
    pass


class InsufficientWindowError(ConfigError):
    pass


class InvalidParamsError(ConfigError):
    pass


class DomainError(ApproxError, ValueError):
    """Evaluation point outside the closed unit disk."""


class BoundViolationError(ApproxError, ValueError):
    """A certified sup norm exceeds the uniform bound it was checked against."""


class PreconditionViolationError(ApproxError, ValueError):
    pass


class SolverFailureError(ApproxError, RuntimeError):
    pass


class CertificateInconsistencyError(ApproxError, RuntimeError):
    """lower > upper + tol_cert. Always a numerical bug, never a valid outcome."""


class ParseError(ConfigError):
    """Malformed input file: JSON syntax (line/column) or schema (field location)."""
