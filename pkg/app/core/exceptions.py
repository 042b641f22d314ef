"""
Custom Exception Classes

This module defines the exception hierarchy for the Awbgk solver,
providing clear error categorization and a process exit code per category.
"""

from typing import Any, Dict, Optional

from app.models.enums import ExitCode


class AwbgkException(Exception):
    """
    Base exception class for all Awbgk-related errors.

    All custom exceptions in the application inherit from this class so the
    command line layer can map any failure to an exit code and a JSON report.

    Attributes:
        message: Human-readable error message
        exit_code: Process exit code reported by the CLI
        details: Additional error details
    """

    def __init__(
        self,
        message: str,
        exit_code: int = ExitCode.RUNTIME_ERROR,
        details: Optional[Dict[str, Any]] = None,
    ):
        """
        Initialize AwbgkException.

        Args:
            message: Human-readable error message
            exit_code: Process exit code (default: runtime error)
            details: Additional error details dictionary
        """
        super().__init__(message)
        self.message = message
        self.exit_code = int(exit_code)
        self.details = details or {}

    def to_dict(self) -> Dict[str, Any]:
        """
        Convert exception to dictionary format.

        Returns:
            Dictionary representation of the exception
        """
        return {
            "error": self.__class__.__name__,
            "message": self.message,
            "details": self.details,
        }


class ValidationError(AwbgkException):
    """
    Exception raised when validation fails.

    This includes malformed run configurations, unknown keys, values
    outside their admissible range and negative distributions read from disk.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=ExitCode.VALIDATION_ERROR, details=details)


class ConfigurationError(AwbgkException):
    """
    Exception raised when application settings are invalid or missing.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=ExitCode.VALIDATION_ERROR, details=details)


class DomainError(AwbgkException):
    """
    Exception raised when a special function is evaluated outside its domain.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=ExitCode.RUNTIME_ERROR, details=details)


class ConvergenceError(AwbgkException):
    """
    Exception raised when an iterative solver fails to converge.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=ExitCode.RUNTIME_ERROR, details=details)


class InvalidStateError(AwbgkException):
    """
    Exception raised when a distribution is too degenerate for the
    Eckart / Landau-Lifshitz frame decomposition.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=ExitCode.RUNTIME_ERROR, details=details)


class ClosureDomainError(DomainError):
    """
    Exception raised when the energy per particle leaves the range of the
    temperature closure (e <= 1).
    """


class MatchedClosureError(ConvergenceError):
    """
    Exception raised when the matched closure Newton iteration diverges.

    The formula-mode parameters are carried in ``details["fallback"]`` so
    callers may continue with them.
    """


class RegimeError(AwbgkException):
    """
    Exception raised when a perturbation leaves the near-equilibrium regime
    (1 + Psi <= 0).
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=ExitCode.RUNTIME_ERROR, details=details)


class PropertySuiteFailure(AwbgkException):
    """
    Exception raised when a property suite run by ``check`` reports failures.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=ExitCode.PROPERTY_FAILURE, details=details)


class OutputError(AwbgkException):
    """
    Exception raised when an output file cannot be written.
    """

    def __init__(self, message: str, details: Optional[Dict[str, Any]] = None):
        super().__init__(message, exit_code=ExitCode.RUNTIME_ERROR, details=details)
