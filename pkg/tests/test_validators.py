"""Tests for validation utilities."""

import numpy as np
import pytest

from src.utils.exceptions import DomainError, EmbeddingLabError, ValidationError
from src.utils.validators import (
    validate_choice,
    validate_dimension,
    validate_exponent,
    validate_finite_array,
    validate_measure,
    validate_positive_number,
)


class TestPositiveNumberValidation:
    """Test positive number validation."""

    def test_valid_positive_number(self):
        """Test valid positive numbers."""
        validate_positive_number(0)
        validate_positive_number(10.5)
        validate_positive_number(np.float64(3.0))
        validate_positive_number(np.int64(2))

    def test_invalid_negative(self):
        """Test negative number."""
        with pytest.raises(ValidationError, match="Invalid value"):
            validate_positive_number(-1)

    def test_strict_rejects_bound(self):
        """Test strict bound excludes the minimum."""
        with pytest.raises(ValidationError, match="Must be > 0"):
            validate_positive_number(0.0, "L", strict=True)

    def test_custom_minimum(self):
        """Test custom minimum value."""
        validate_positive_number(5, min_value=5)
        with pytest.raises(ValidationError, match="Must be >= 5"):
            validate_positive_number(4.9, min_value=5)

    def test_invalid_type(self):
        """Test non-numeric and boolean values."""
        with pytest.raises(ValidationError, match="Must be numeric"):
            validate_positive_number("10")
        with pytest.raises(ValidationError, match="Must be numeric"):
            validate_positive_number(True)

    def test_nan_rejected(self):
        """Test NaN is rejected."""
        with pytest.raises(ValidationError, match="NaN"):
            validate_positive_number(float('nan'))

    def test_infinity_accepted(self):
        """Test infinity passes a lower bound."""
        validate_positive_number(float('inf'), min_value=1.0)


class TestMeasureValidation:
    """Test measure coordinate validation."""

    def test_valid_measure(self):
        """Test positive measures."""
        validate_measure(1e-300)
        validate_measure(2)

    @pytest.mark.parametrize("s", [0.0, -1.0, float('nan')])
    def test_invalid_measure_is_domain_error(self, s):
        """Test nonpositive and NaN measures raise DomainError."""
        with pytest.raises(DomainError, match="Invalid s"):
            validate_measure(s)

    def test_measure_name_in_message(self):
        """Test the coordinate name appears in the message."""
        with pytest.raises(DomainError, match="Invalid t"):
            validate_measure(-0.5, "t")


class TestDimensionValidation:
    """Test dimension validation."""

    def test_valid_dimensions(self):
        """Test integer dimensions >= 2."""
        for n in (2, 3, 10, np.int32(4)):
            validate_dimension(n)

    @pytest.mark.parametrize("n", [1, 0, 2.0, "3", True])
    def test_invalid_dimensions(self, n):
        """Test dimensions that are too small or not integers."""
        with pytest.raises(ValidationError, match="Invalid dimension"):
            validate_dimension(n)


class TestExponentValidation:
    """Test exponent validation."""

    def test_valid_exponents(self):
        """Test exponents in [1, inf]."""
        validate_exponent(1.0)
        validate_exponent(2.5)
        validate_exponent(float('inf'))

    def test_exponent_below_one(self):
        """Test exponent below 1."""
        with pytest.raises(ValidationError, match="Invalid q"):
            validate_exponent(0.5, "q")

    def test_infinity_not_allowed(self):
        """Test finite-only exponents."""
        with pytest.raises(ValidationError, match="Must be finite"):
            validate_exponent(float('inf'), allow_infinity=False)


class TestArrayAndChoiceValidation:
    """Test array and vocabulary validation."""

    def test_finite_array_returns_float_array(self):
        """Test a finite array is returned as floats."""
        array = validate_finite_array([1, 2, 3])
        assert array.dtype == float
        np.testing.assert_array_equal(array, [1.0, 2.0, 3.0])

    def test_non_finite_array(self):
        """Test non-finite entries are rejected."""
        with pytest.raises(ValidationError, match="non-finite"):
            validate_finite_array([1.0, np.inf])

    def test_valid_choice(self):
        """Test a valid choice."""
        validate_choice('power', ('power', 'indicator'))

    def test_invalid_choice(self):
        """Test an invalid choice lists the vocabulary."""
        with pytest.raises(ValidationError, match="Must be one of"):
            validate_choice('gauss', ('power', 'indicator'), "trial family kind")


class TestExceptionHierarchy:
    """Test that every error shares the common root."""

    def test_errors_share_root(self):
        """Test validation and domain errors derive from EmbeddingLabError."""
        assert issubclass(ValidationError, EmbeddingLabError)
        assert issubclass(DomainError, EmbeddingLabError)
