"""
Core module initialization.

This module contains core functionality including configuration management,
exception handling, and logging setup.
"""

from app.core.config import Config
from app.core.exceptions import (
    AwbgkException,
    ConfigurationError,
    ConvergenceError,
    DomainError,
    ValidationError,
)
from app.core.logging import get_logger, setup_logging

__all__ = [
    "Config",
    "AwbgkException",
    "ConfigurationError",
    "ConvergenceError",
    "DomainError",
    "ValidationError",
    "setup_logging",
    "get_logger",
]
