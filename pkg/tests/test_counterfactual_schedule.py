import pytest
import numpy as np
import pandas as pd

from src.counterfactual import Scenario, make_schedule
from src.error import DomainError, SimulationError, ValidationError


def _rollout(n_days=200, start=10, rate=0.5, cap=60.0, interval=28):
    days = np.arange(n_days)
    v1 = np.clip(rate * (days - start + 1), 0.0, cap)
    v2 = np.zeros(n_days)
    v2[interval:] = v1[:-interval]
    return v1, v2


@pytest.mark.unit
@pytest.mark.fast
class TestScenario:
    """Test cases for Scenario model."""

    def test_defaults(self):
        """Test default draws and outcomes."""
        scenario = Scenario(country="CAN", interval_weeks=8, v1_cap=65, start="2021-02-01")

        assert scenario.draws == 200
        assert scenario.outcomes == ("cases", "deaths")
        assert scenario.interval_days == 56

    @pytest.mark.parametrize("kwargs", [
        {"interval_weeks": 0},
        {"v1_cap": 0.0},
        {"v1_cap": 100.5},
        {"draws": 0},
        {"end": "2021-01-01"},
        {"seed": -1},
        {"outcomes": ("hospitalisations",)},
    ])
    def test_invalid(self, kwargs):
        """Test that invalid scenarios raise ValidationError."""
        base = {"country": "CAN", "interval_weeks": 8, "v1_cap": 65, "start": "2021-02-01"}

        with pytest.raises(ValidationError):
            Scenario(**{**base, **kwargs})


@pytest.mark.unit
@pytest.mark.fast
class TestMakeSchedule:
    """Test cases for make_schedule function."""

    def test_actual_interval_is_fixed_point(self):
        """Test that the observed interval and a slack cap reproduce observed coverage."""
        v1, v2 = _rollout()
        schedule = make_schedule(v1, v2, interval_weeks=4, v1_cap=100.0)

        np.testing.assert_allclose(schedule.v1, v1, rtol=0, atol=1e-12)
        np.testing.assert_allclose(schedule.v2, v2, rtol=0, atol=1e-12)
        assert schedule.divergence_index is None

    def test_all_first_doses_limit(self):
        """Test that a cap at total doses and a huge interval gives only first doses."""
        v1, v2 = _rollout(n_days=120)
        total = v1 + v2
        schedule = make_schedule(v1, v2, interval_weeks=100, v1_cap=float(total[-1]))

        np.testing.assert_allclose(schedule.v1, total, rtol=0, atol=1e-12)
        np.testing.assert_allclose(schedule.v2, 0.0, atol=1e-12)

    def test_longer_interval_raises_first_doses(self):
        """Test that an 8-week interval front-loads first doses."""
        v1, v2 = _rollout(interval=24)
        schedule = make_schedule(v1, v2, interval_weeks=8, v1_cap=55.0, start_index=40)

        assert (schedule.v1 >= v1 - 1e-9)[:120].all()
        assert schedule.v1[80] > v1[80]
        assert schedule.divergence_index >= 40

    def test_invariants(self):
        """Test conservation, ordering, monotonicity and the cap."""
        v1, v2 = _rollout(interval=21, cap=70.0)
        dates = pd.date_range("2020-12-01", periods=len(v1))
        schedule = make_schedule(pd.Series(v1, index=dates), pd.Series(v2, index=dates), interval_weeks=12, v1_cap=45.0, start_index=30)

        assert schedule.max_conservation_error() <= 1e-9
        assert (schedule.v2 >= -1e-12).all()
        assert (schedule.v2 <= schedule.v1 + 1e-9).all()
        assert (np.diff(schedule.v1) >= -1e-9).all()
        assert (np.diff(schedule.v2) >= -1e-9).all()
        assert (schedule.v1 <= np.maximum(45.0, v1) + 1e-9).all()
        np.testing.assert_array_equal(schedule.v1[:30], v1[:30])
        assert schedule.dates.equals(dates)

    def test_second_doses_respect_interval(self):
        """Test that no second dose precedes its interval while the cap is slack."""
        v1, v2 = _rollout(interval=21)
        schedule = make_schedule(v1, v2, interval_weeks=6, v1_cap=100.0)

        lagged = np.concatenate([np.zeros(42), schedule.v1[:-42]])
        assert (schedule.v2 <= lagged + 1e-9).all()
        assert schedule.early_second_doses == 0.0

    def test_early_second_doses_counted(self):
        """Test that doses beyond a binding cap become early second doses."""
        total = np.arange(1.0, 41.0)
        v1 = np.minimum(total, 20.0)
        schedule = make_schedule(v1, total - v1, interval_weeks=12, v1_cap=20.0)

        assert schedule.early_second_doses == pytest.approx(20.0)
        np.testing.assert_allclose(schedule.v1, v1)

    def test_decreasing_total(self):
        """Test that decreasing observed totals raise DomainError."""
        v1, v2 = _rollout()
        v1[100] -= 1.0

        with pytest.raises(DomainError):
            make_schedule(v1, v2, interval_weeks=8, v1_cap=60.0)

    @pytest.mark.parametrize("kwargs", [{"interval_weeks": 0}, {"v1_cap": 0.0}, {"start_index": -1}])
    def test_invalid_arguments(self, kwargs):
        """Test that invalid arguments raise ValidationError."""
        v1, v2 = _rollout()

        with pytest.raises(ValidationError):
            make_schedule(v1, v2, **{"interval_weeks": 8, "v1_cap": 60.0, **kwargs})

    def test_missing_values(self):
        """Test that missing coverage raises SimulationError."""
        v1, v2 = _rollout()
        v1[50] = np.nan

        with pytest.raises(SimulationError):
            make_schedule(v1, v2, interval_weeks=8, v1_cap=60.0)

    def test_total_doses_only(self):
        """Test that a country without first-dose data points to the total-dose term."""
        v1, v2 = _rollout()
        v1[:] = np.nan

        with pytest.raises(SimulationError, match="total-dose"):
            make_schedule(v1, v2, interval_weeks=8, v1_cap=60.0)
