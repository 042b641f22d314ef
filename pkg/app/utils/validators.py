"""
Validation Utility Functions

This module provides validation functions for configuration values and
distribution fields.
"""

import math
from typing import Any, Dict, Iterable, Optional

import numpy as np

from app.core.exceptions import ValidationError


class Validators:
    """
    Utility class for data validation.

    Provides static methods that return the validated (and coerced) value or
    raise ValidationError naming the offending key.
    """

    @staticmethod
    def validate_known_keys(data: Dict[str, Any], allowed: Iterable[str], section: str = "") -> None:
        """
        Reject keys outside ``allowed``.

        Raises:
            ValidationError: Naming the first unknown key
        """
        allowed = set(allowed)
        unknown = sorted(k for k in data if k not in allowed)
        if unknown:
            where = f"{section}.{unknown[0]}" if section else unknown[0]
            raise ValidationError(
                f"Unknown configuration key '{where}'",
                details={"key": where, "unknown_keys": unknown, "allowed": sorted(allowed)},
            )

    @staticmethod
    def validate_positive(value: Any, name: str) -> float:
        """
        Validate a positive finite real.

        Raises:
            ValidationError: If the value is not a number, not finite or not > 0
        """
        if isinstance(value, bool):
            raise ValidationError(f"{name} must be a positive number", details={"key": name, "value": value})
        try:
            number = float(value)
        except (TypeError, ValueError):
            raise ValidationError(f"{name} must be a positive number", details={"key": name, "value": value})
        if not math.isfinite(number) or number <= 0.0:
            raise ValidationError(f"{name} must be a positive number", details={"key": name, "value": value})
        return number

    @staticmethod
    def validate_integer(value: Any, name: str, minimum: Optional[int] = None) -> int:
        """
        Validate an integer (floats with an integral value are rejected).

        Raises:
            ValidationError: If the value is not an int or below ``minimum``
        """
        if isinstance(value, bool) or not isinstance(value, (int, np.integer)):
            raise ValidationError(f"{name} must be an integer", details={"key": name, "value": value})
        value = int(value)
        if minimum is not None and value < minimum:
            raise ValidationError(
                f"{name} must be at least {minimum}",
                details={"key": name, "value": value, "minimum": minimum},
            )
        return value

    @staticmethod
    def validate_even_integer(value: Any, name: str, minimum: Optional[int] = None) -> int:
        """
        Validate an even integer, e.g. the nodes per momentum axis.

        Raises:
            ValidationError: "<name> must be even" for odd values
        """
        value = Validators.validate_integer(value, name)
        if value % 2:
            raise ValidationError(f"{name} must be even", details={"key": name, "value": value})
        if minimum is not None and value < minimum:
            raise ValidationError(
                f"{name} must be at least {minimum}",
                details={"key": name, "value": value, "minimum": minimum},
            )
        return value

    @staticmethod
    def validate_fraction(value: Any, name: str) -> float:
        """
        Validate a real in (0, 1].

        Raises:
            ValidationError: If outside (0, 1]
        """
        number = Validators.validate_positive(value, name)
        if number > 1.0:
            raise ValidationError(f"{name} must lie in (0, 1]", details={"key": name, "value": value})
        return number

    @staticmethod
    def validate_choice(value: Any, name: str, choices: Iterable[Any]) -> Any:
        """
        Validate membership in a fixed set of choices.

        Raises:
            ValidationError: Listing the valid choices
        """
        choices = list(choices)
        if value not in choices:
            raise ValidationError(
                f"{name} must be one of {choices}, got {value!r}",
                details={"key": name, "value": value, "choices": choices},
            )
        return value

    @staticmethod
    def validate_bool(value: Any, name: str) -> bool:
        """Validate a JSON boolean."""
        if not isinstance(value, bool):
            raise ValidationError(f"{name} must be true or false", details={"key": name, "value": value})
        return value

    @staticmethod
    def validate_distribution(F: np.ndarray, name: str = "F") -> np.ndarray:
        """
        Validate a distribution field: finite and non-negative everywhere.

        Raises:
            ValidationError: Reporting the most negative value found
        """
        F = np.asarray(F, dtype=float)
        if not np.all(np.isfinite(F)):
            raise ValidationError(f"{name} contains non-finite values", details={"key": name})
        if F.size and F.min() < 0.0:
            raise ValidationError(
                f"{name} must be non-negative",
                details={"key": name, "min": float(F.min())},
            )
        return F
