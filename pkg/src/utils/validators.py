"""Input validation utilities for norms, profiles and grids."""

import math
from typing import Any, Iterable

import numpy as np

from src.utils.exceptions import DomainError, ValidationError
from src.utils.logger import get_logger

logger = get_logger(__name__)


def validate_positive_number(
    value: Any,
    name: str = "value",
    min_value: float = 0.0,
    strict: bool = False
) -> None:
    """
    Validate a real number bounded from below.

    Args:
        value: Value to validate
        name: Name of the value for error messages
        min_value: Minimum allowed value (default: 0.0)
        strict: Require value > min_value instead of value >= min_value

    Raises:
        ValidationError: If value is not numeric or is below the bound
    """
    if isinstance(value, bool) or not isinstance(value, (int, float, np.integer, np.floating)):
        raise ValidationError(f"Invalid {name} type: {type(value)}. Must be numeric")

    if math.isnan(value):
        raise ValidationError(f"Invalid {name}: {value}. Must not be NaN")

    if strict and not value > min_value:
        raise ValidationError(f"Invalid {name}: {value}. Must be > {min_value}")
    if value < min_value:
        raise ValidationError(f"Invalid {name}: {value}. Must be >= {min_value}")


def validate_measure(s: Any, name: str = "s") -> None:
    """
    Validate a measure coordinate s > 0.

    Raises:
        DomainError: If s is not a positive finite number
    """
    if isinstance(s, bool) or not isinstance(s, (int, float, np.integer, np.floating)):
        raise DomainError(f"Invalid {name}: {s}. Must be numeric")
    if not (s > 0):
        raise DomainError(f"Invalid {name}: {s}. Must be > 0")


def validate_dimension(n: Any, min_value: int = 2) -> None:
    """
    Validate the space dimension.

    Raises:
        ValidationError: If n is not an integer >= min_value
    """
    if isinstance(n, bool) or not isinstance(n, (int, np.integer)) or n < min_value:
        raise ValidationError(f"Invalid dimension n: {n}. Must be integer >= {min_value}")


def validate_exponent(p: Any, name: str = "p", allow_infinity: bool = True) -> None:
    """
    Validate an exponent in [1, inf].

    Raises:
        ValidationError: If p is outside [1, inf]
    """
    validate_positive_number(p, name, min_value=1.0)
    if not allow_infinity and math.isinf(p):
        raise ValidationError(f"Invalid {name}: {p}. Must be finite")


def validate_finite_array(values: Any, name: str = "array") -> np.ndarray:
    """
    Validate an array of finite reals.

    Args:
        values: Array-like input
        name: Name for error messages

    Returns:
        Float array view of the input

    Raises:
        ValidationError: If the array has non-finite entries
    """
    array = np.asarray(values, dtype=float)
    if not np.all(np.isfinite(array)):
        raise ValidationError(f"Invalid {name}: contains non-finite entries")
    return array


def validate_choice(value: Any, valid: Iterable[str], name: str = "value") -> None:
    """
    Validate a string against a fixed vocabulary.

    Raises:
        ValidationError: If value is not one of the valid choices
    """
    valid = tuple(valid)
    if not isinstance(value, str) or value not in valid:
        raise ValidationError(f"Invalid {name}: {value}. Must be one of {valid}")
