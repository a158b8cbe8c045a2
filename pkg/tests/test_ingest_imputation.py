import pytest
import numpy as np
import pandas as pd

from src.error import ImputationError
from src.ingest.imputation import impute_policy, impute_vaccination


def _series(values, start="2021-03-01"):
    # 2021-03-01 is a Monday
    return pd.Series(values, index=pd.date_range(start, periods=len(values)), dtype=float)


@pytest.mark.unit
class TestImputePolicy:
    """Test cases for impute_policy function."""

    def test_weekday_gap_interpolated(self):
        """Test that a weekday gap takes the linear midpoint."""
        result = impute_policy(_series([50.0, np.nan, 60.0]))

        assert result.tolist() == [50.0, 55.0, 60.0]

    def test_weekend_gap_carries_previous(self):
        """Test that Saturday and Sunday gaps take Friday's value."""
        # Fri 2021-03-05 .. Mon 2021-03-08
        result = impute_policy(_series([40.0, np.nan, np.nan, 46.0], start="2021-03-05"))

        assert result.tolist() == [40.0, 40.0, 40.0, 46.0]

    def test_weekend_after_interpolated_friday(self):
        """Test that a weekend gap carries an interpolated Friday forward."""
        # Thu 30, Fri ?, Sat ?, Sun ?, Mon 50
        result = impute_policy(_series([30.0, np.nan, np.nan, np.nan, 50.0], start="2021-03-04"))

        assert result.iloc[1] == pytest.approx(35.0)
        assert result.iloc[2] == result.iloc[1]
        assert result.iloc[3] == result.iloc[1]

    def test_friday_saturday_convention(self):
        """Test that a Friday gap is carried forward under a Fri/Sat weekend."""
        result = impute_policy(_series([40.0, np.nan, 46.0], start="2021-03-04"), weekend_days=(4, 5))

        assert result.tolist() == [40.0, 40.0, 46.0]

    def test_trailing_gap_carried_forward(self):
        """Test that trailing gaps carry the last value."""
        result = impute_policy(_series([10.0, 20.0, np.nan, np.nan]))

        assert result.tolist() == [10.0, 20.0, 20.0, 20.0]

    def test_leading_gap_backfilled(self):
        """Test that leading gaps are backfilled from the first value."""
        result = impute_policy(_series([np.nan, 20.0, 30.0]))

        assert result.tolist() == [20.0, 20.0, 30.0]

    def test_gap_free_unchanged(self):
        """Test that gap-free input is returned unchanged."""
        series = _series([1.0, 2.0, 3.0, 4.0])

        pd.testing.assert_series_equal(impute_policy(series), series)

    def test_all_missing_raises(self):
        """Test that an all-missing series raises an imputation error."""
        with pytest.raises(ImputationError):
            impute_policy(_series([np.nan, np.nan]))

    def test_idempotent_and_preserves_observed(self):
        """Test idempotence and that observed cells are never altered."""
        rng = np.random.default_rng(3)
        values = rng.uniform(0, 100, 60)
        values[rng.uniform(size=60) < 0.4] = np.nan
        values[0] = 12.0
        series = _series(values)

        once = impute_policy(series)
        twice = impute_policy(once)

        pd.testing.assert_series_equal(once, twice)
        observed = series.notna()
        assert (once[observed] == series[observed]).all()
        assert once.notna().all()


@pytest.mark.unit
class TestImputeVaccination:
    """Test cases for impute_vaccination function."""

    def test_leading_zero_interior_linear_trailing_carry(self):
        """Test the three gap rules of cumulative vaccination series."""
        result = impute_vaccination(_series([np.nan, np.nan, 1.0, np.nan, 3.0, np.nan]))

        assert result.tolist() == [0.0, 0.0, 1.0, 2.0, 3.0, 3.0]

    def test_all_missing_untouched(self):
        """Test that a country without reports stays missing."""
        result = impute_vaccination(_series([np.nan, np.nan]))

        assert result.isna().all()
