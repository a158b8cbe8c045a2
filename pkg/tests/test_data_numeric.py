import math

import pytest
import numpy as np

from src.data import LOG_FLOOR, dependent_columns, difference, floored_log, rolling_sum, shift


@pytest.mark.unit
@pytest.mark.fast
class TestShift:
    """Test cases for shift function."""

    def test_one_dimensional(self):
        """Test that values move forward and the head is NaN."""
        out = shift([1.0, 2.0, 3.0, 4.0], 2)

        assert np.isnan(out[:2]).all()
        np.testing.assert_array_equal(out[2:], [1.0, 2.0])

    def test_rows_shift_independently(self):
        """Test that panels shift along time within each country row."""
        out = shift([[1.0, 2.0, 3.0], [10.0, 20.0, 30.0]], 1)

        np.testing.assert_array_equal(out[:, 1:], [[1.0, 2.0], [10.0, 20.0]])
        assert np.isnan(out[:, 0]).all()

    def test_zero_lag_copies(self):
        """Test that lag 0 returns an independent copy."""
        values = np.array([1.0, 2.0])
        out = shift(values, 0)
        out[0] = 9.0

        assert values[0] == 1.0

    def test_lag_beyond_length(self):
        """Test that a lag longer than the series gives all NaN."""
        assert np.isnan(shift([1.0, 2.0], 5)).all()

    def test_negative_lag(self):
        """Test ValueError for a negative lag."""
        with pytest.raises(ValueError, match="non-negative"):
            shift([1.0, 2.0], -1)


@pytest.mark.unit
@pytest.mark.fast
class TestDifferenceAndRollingSum:
    """Test cases for difference and rolling_sum functions."""

    def test_difference(self):
        """Test the first and weekly differences."""
        values = np.arange(10, dtype=float) ** 2

        assert difference(values)[3] == 9.0 - 4.0
        assert difference(values, 7)[9] == 81.0 - 4.0
        assert np.isnan(difference(values, 7)[6])

    def test_rolling_sum(self):
        """Test the trailing sum and NaN head."""
        out = rolling_sum([1.0, 2.0, 3.0, 4.0], 3)

        assert np.isnan(out[:2]).all()
        np.testing.assert_array_equal(out[2:], [6.0, 9.0])

    def test_rolling_sum_missing_term(self):
        """Test that a missing term makes the window NaN."""
        out = rolling_sum([1.0, np.nan, 3.0, 4.0, 5.0], 2)

        assert np.isnan(out[1]) and np.isnan(out[2])
        assert out[4] == 9.0


@pytest.mark.unit
@pytest.mark.fast
class TestFlooredLog:
    """Test cases for floored_log function."""

    def test_zeros_floored_and_counted(self):
        """Test that zeros use the floor and NaN stays NaN."""
        out, floored = floored_log([0.0, 1.0, np.nan, math.e])

        assert floored == 1
        assert out[0] == pytest.approx(math.log(LOG_FLOOR))
        assert out[1] == 0.0
        assert np.isnan(out[2])
        assert out[3] == pytest.approx(1.0)

    def test_custom_floor(self):
        """Test a caller-supplied floor."""
        out, floored = floored_log([0.2, 3.0], floor=1.0)

        assert floored == 1
        np.testing.assert_allclose(out, [0.0, math.log(3.0)])


@pytest.mark.unit
@pytest.mark.fast
class TestDependentColumns:
    """Test cases for dependent_columns function."""

    def test_full_rank(self):
        """Test that an independent design returns no columns."""
        rng = np.random.default_rng(0)

        assert dependent_columns(rng.normal(size=(30, 3)), ["a", "b", "c"]) == []

    def test_linear_combination(self):
        """Test that the combination and its parts are reported."""
        rng = np.random.default_rng(1)
        base = rng.normal(size=(40, 3))
        matrix = np.column_stack([base, base[:, 0] + 2.0 * base[:, 2]])

        assert dependent_columns(matrix, ["a", "b", "c", "d"]) == ["a", "c", "d"]

    def test_zero_column(self):
        """Test that an all-zero column is reported alone."""
        matrix = np.column_stack([np.ones(5), np.zeros(5)])

        assert dependent_columns(matrix, ["const", "empty"]) == ["empty"]

    def test_empty(self):
        """Test that a design without columns returns nothing."""
        assert dependent_columns(np.empty((4, 0)), []) == []
