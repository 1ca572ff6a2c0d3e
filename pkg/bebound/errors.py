"""
Exception hierarchy for bebound
Every failure the library raises derives from BoundError; the CLI maps classes to exit codes
"""

from typing import Optional


class BoundError(Exception):
    """Base class for all bebound failures"""

    exit_code = 2


class ConfigError(BoundError):
    """Invalid environment configuration"""

    exit_code = 1


class DomainError(BoundError, ValueError):
    """An operation was called outside its preconditions"""

    exit_code = 1


class DistSpecError(DomainError):
    """Malformed distribution or grid specification"""


class SupportBlowupError(DomainError):
    """Exact convolution would exceed the configured support cap"""


class QuadratureError(BoundError):
    """Numerical integration did not reach the requested tolerance"""

    exit_code = 2

    def __init__(self, message: str, abs_error: Optional[float] = None, tol: Optional[float] = None):
        super().__init__(message)
        self.abs_error = abs_error
        self.tol = tol


class SymmetryError(QuadratureError):
    """Integrand was declared Hermitian but the imaginary residual exceeds tolerance"""


class AuditFailure(BoundError):
    """A checked inequality was violated beyond tolerance"""

    exit_code = 3
