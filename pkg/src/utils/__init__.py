"""Utility modules: logging, errors, validation, metrics and the choice ledger."""

from src.utils.validators import (
    validate_choice,
    validate_dimension,
    validate_exponent,
    validate_finite_array,
    validate_measure,
    validate_positive_number
)

__all__ = [
    'validate_choice',
    'validate_dimension',
    'validate_exponent',
    'validate_finite_array',
    'validate_measure',
    'validate_positive_number'
]
