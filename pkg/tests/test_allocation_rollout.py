import logging

import pytest
import numpy as np

from src.allocation.comparison import dominance_report
from src.allocation.efficacy import EfficacyProfile
from src.allocation.rollout import protection_path, simulate_rollout, strategy_schedules
from src.error import ComparisonError, DomainError

CAPACITY = 100.0 / 120.0
CASE_1 = EfficacyProfile(ve1=0.90, ve2=0.95)
CASE_2 = EfficacyProfile(ve1=0.50, ve2=0.95)


def _assert_invariants(schedule):
    v1, v2 = schedule.v1, schedule.v2
    assert (np.diff(v1) >= -1e-12).all()
    assert (np.diff(v2) >= -1e-12).all()
    assert (v2 <= v1 + 1e-12).all()
    assert (v1 <= 100.0 + 1e-12).all()
    assert (schedule.doses() <= schedule.capacity + 1e-12).all()
    assert v1[-1] + v2[-1] <= schedule.stock + 1e-9
    lagged = np.concatenate([np.zeros(schedule.interval_days), v1[: len(v1) - schedule.interval_days]])
    assert (v2 <= lagged + 1e-9).all()


@pytest.mark.unit
@pytest.mark.fast
class TestSimulateRollout:
    """Test cases for simulate_rollout function."""

    def test_long_interval_all_first_doses(self):
        """Test that a 120-day interval over 120 days gives only first doses."""
        schedule = simulate_rollout(100.0, CAPACITY, 120, 120)

        assert schedule.v1[-1] == pytest.approx(100.0)
        assert schedule.v2[-1] == 0.0
        _assert_invariants(schedule)

    def test_three_week_interval_equal_split(self):
        """Test the equal split once second doses begin on day 22."""
        schedule = simulate_rollout(100.0, CAPACITY, 21, 120)

        assert schedule.v1[21] == pytest.approx(21 * CAPACITY)
        assert schedule.v2[120] == pytest.approx(0.5 * CAPACITY * 99)
        assert schedule.v1[120] == pytest.approx(schedule.v1[21] + 0.5 * CAPACITY * 99)
        assert schedule.v1[120] + schedule.v2[120] == pytest.approx(100.0, abs=1e-9)
        _assert_invariants(schedule)

    def test_zero_stock(self):
        """Test that no stock gives an all-zero schedule."""
        schedule = simulate_rollout(0.0, CAPACITY, 21, 30)

        assert not schedule.v1.any()
        assert not schedule.v2.any()

    @pytest.mark.parametrize("stock, capacity, interval, horizon, rule", [
        (100.0, CAPACITY, 21, 120, "equal"),
        (100.0, CAPACITY, 21, 120, "due_priority"),
        (60.0, 1.5, 28, 200, "equal"),
        (150.0, 2.0, 14, 90, "due_priority"),
        (30.0, 0.3, 84, 365, "equal"),
    ])
    def test_conservation_and_invariants(self, stock, capacity, interval, horizon, rule):
        """Test dose conservation and schedule invariants across settings."""
        schedule = simulate_rollout(stock, capacity, interval, horizon, rule)

        total = schedule.v1[-1] + schedule.v2[-1]
        assert total == pytest.approx(min(stock, capacity * horizon), abs=1e-9) or schedule.v1[-1] == pytest.approx(100.0)
        _assert_invariants(schedule)

    def test_due_priority_serves_due_cohorts(self):
        """Test that due-priority gives more second doses than the equal split."""
        equal = simulate_rollout(100.0, CAPACITY, 21, 120, "equal")
        priority = simulate_rollout(100.0, CAPACITY, 21, 120, "due_priority")

        assert priority.v2[-1] > equal.v2[-1]

    def test_degenerate_schedule_warns(self, caplog):
        """Test that a negligible capacity warns instead of failing."""
        with caplog.at_level(logging.WARNING):
            schedule = simulate_rollout(100.0, 0.001, 21, 10)

        assert schedule.warnings
        assert "Degenerate schedule" in caplog.text

    @pytest.mark.parametrize("kwargs", [
        {"stock": -1.0, "capacity": 1.0, "interval_days": 21, "horizon_days": 10},
        {"stock": 1.0, "capacity": 1.0, "interval_days": 0, "horizon_days": 10},
        {"stock": 1.0, "capacity": 1.0, "interval_days": 21, "horizon_days": 10, "split_rule": "random"},
    ])
    def test_invalid_arguments(self, kwargs):
        """Test that invalid arguments raise a domain error."""
        with pytest.raises(DomainError):
            simulate_rollout(**kwargs)


@pytest.mark.unit
@pytest.mark.fast
class TestProtectionPath:
    """Test cases for protection_path function."""

    def test_long_interval_final_protection(self):
        """Test that the all-first-dose limit ends at ve1."""
        schedule = simulate_rollout(100.0, CAPACITY, 120, 120)

        assert protection_path(schedule, CASE_1)[120] == pytest.approx(0.90)

    def test_day_zero(self):
        """Test that protection starts at zero."""
        assert protection_path(simulate_rollout(100.0, CAPACITY, 21, 120), CASE_1)[0] == 0.0

    def test_equal_efficacy_depends_on_v1_only(self):
        """Test that zero marginal efficacy makes protection a function of v1."""
        schedule = simulate_rollout(100.0, CAPACITY, 21, 120)

        path = protection_path(schedule, EfficacyProfile(ve1=0.8, ve2=0.8))

        np.testing.assert_allclose(path, 0.8 * schedule.v1 / 100.0)


@pytest.mark.unit
@pytest.mark.fast
class TestDominanceReport:
    """Test cases for dominance_report function."""

    @pytest.mark.parametrize("profile", [CASE_1, CASE_2])
    def test_longer_intervals_dominate(self, profile):
        """Test that 120 >= 90 >= 21 days pointwise from day 22."""
        report = dominance_report(strategy_schedules(), profile)

        assert report.intervals == [21, 90, 120]
        assert report.dominates_from(22)
        assert report.ranking[120][0] == 2

    def test_input_order_irrelevant(self):
        """Test that schedules are ordered by interval internally."""
        schedules = strategy_schedules(intervals=(120, 21, 90))

        assert dominance_report(schedules, CASE_1).intervals == [21, 90, 120]

    def test_single_schedule(self):
        """Test that a single schedule is trivially dominant."""
        report = dominance_report([simulate_rollout(100.0, CAPACITY, 21, 120)], CASE_1)

        assert report.dominates_from(0)

    def test_identical_schedules_tie(self):
        """Test that identical schedules tie on every day."""
        schedule = simulate_rollout(100.0, CAPACITY, 21, 120)

        report = dominance_report([schedule, schedule], CASE_1)

        assert all(report.ties(day) for day in range(121))

    def test_mismatched_horizons(self):
        """Test that different horizons raise a comparison error."""
        with pytest.raises(ComparisonError):
            dominance_report([simulate_rollout(100.0, CAPACITY, 21, 120), simulate_rollout(100.0, CAPACITY, 21, 100)], CASE_1)
