"""Unit tests for the constant-hazard DGP, calibration and studies."""

import math

import numpy as np
import pytest
from pydantic import ValidationError

from cifboot.data import event_mix
from cifboot.errors import CalibrationError
from cifboot.simulation import (
    DGPSpec,
    calibrate_rates,
    coverage_study,
    expected_mix,
    generate_cohort,
    size_power_study,
    true_cif,
)
from cifboot.types import BandType, SchemeKind, TestKind

TABLE1_MIX = (38.68, 20.06, 41.26)


class TestDGPSpec:
    """Tests for DGPSpec validation."""

    def test_negative_rate(self):
        """Rates must be non-negative."""
        with pytest.raises(ValidationError):
            DGPSpec(hazard1=-1.0, hazard2=1.0)

    def test_zero_event_rate(self):
        """At least one cause needs a positive hazard."""
        with pytest.raises(ValidationError, match="positive"):
            DGPSpec(hazard1=0.0, hazard2=0.0)

    def test_with_size(self):
        """with_size replaces n and optionally the seed."""
        spec = DGPSpec(hazard1=1.0, hazard2=1.0, seed=3).with_size(50)

        assert spec.n == 50
        assert spec.seed == 3


class TestGenerateCohort:
    """Tests for generate_cohort."""

    def test_deterministic(self):
        """Same spec and key give the same cohort."""
        spec = DGPSpec(hazard1=0.3, hazard2=0.2, censor_rate=0.1, n=100, seed=4)

        np.testing.assert_array_equal(generate_cohort(spec, (1,)).exit, generate_cohort(spec, (1,)).exit)
        assert not np.array_equal(generate_cohort(spec, (1,)).exit, generate_cohort(spec, (2,)).exit)

    def test_no_censoring(self):
        """Without censoring every subject has an event."""
        spec = DGPSpec(hazard1=1.0, hazard2=1.0, admin_end=math.inf, n=1000, seed=1)

        assert np.all(generate_cohort(spec).cause > 0)

    def test_symmetric_hazards(self):
        """Equal hazards give half cause-1 events."""
        n = 100_000
        spec = DGPSpec(hazard1=0.7, hazard2=0.7, admin_end=math.inf, n=n, seed=2)
        share = np.mean(generate_cohort(spec).cause == 1)

        assert abs(share - 0.5) < 4 * math.sqrt(0.25 / n)

    def test_administrative_censoring(self):
        """Nobody is followed beyond admin_end."""
        spec = DGPSpec(hazard1=0.1, hazard2=0.1, admin_end=2.0, n=500, seed=3)
        cohort = generate_cohort(spec)

        assert cohort.exit.max() <= 2.0
        assert np.all(cohort.cause[cohort.exit == 2.0] == 0)

    def test_empirical_cif_converges(self):
        """The empirical sub-distribution approaches the closed form."""
        n = 100_000
        spec = DGPSpec(hazard1=0.4, hazard2=0.6, admin_end=math.inf, n=n, seed=5)
        cohort = generate_cohort(spec)
        times = np.linspace(0.1, 4.0, 40)
        empirical = np.array([np.mean((cohort.exit <= t) & (cohort.cause == 1)) for t in times])

        assert np.max(np.abs(empirical - true_cif(spec, times))) <= 3 * math.sqrt(math.log(n) / n)


class TestTrueCif:
    """Tests for true_cif."""

    def test_closed_form(self):
        """F1(t) = a1 / a (1 - exp(-a t))."""
        spec = DGPSpec(hazard1=0.2, hazard2=0.3)

        assert true_cif(spec, 2.0) == pytest.approx(0.4 * (1 - math.exp(-1.0)))
        assert true_cif(spec, 2.0, cause=2) == pytest.approx(0.6 * (1 - math.exp(-1.0)))


class TestCalibrateRates:
    """Tests for calibrate_rates."""

    def test_table_mix(self, calibrated_spec: DGPSpec):
        """Expected mix matches the target within half a point."""
        for got, want in zip(expected_mix(calibrated_spec), TABLE1_MIX):
            assert got == pytest.approx(want, abs=0.5)

    def test_at_risk_fraction(self, calibrated_spec: DGPSpec):
        """exp(-(a + c) admin_end) equals the requested at-risk fraction."""
        total = calibrated_spec.event_rate + calibrated_spec.censor_rate

        assert math.exp(-total * 5.0) == pytest.approx(0.08)

    def test_forced_censor_rate(self):
        """With a fixed censoring hazard the event rate is solved for."""
        spec = calibrate_rates(TABLE1_MIX, admin_end=5.0, censor_rate=0.1)

        assert spec.censor_rate == 0.1
        for got, want in zip(expected_mix(spec), TABLE1_MIX):
            assert got == pytest.approx(want, abs=0.5)

    def test_symmetric_without_censoring(self):
        """(50, 50, 0) without censoring gives equal hazards."""
        spec = calibrate_rates((50.0, 50.0, 0.0), admin_end=math.inf, censor_rate=0.0)

        assert spec.hazard1 == pytest.approx(spec.hazard2)
        assert spec.hazard1 > 0

    def test_no_type1_events(self):
        """hazard1 must stay positive."""
        with pytest.raises(CalibrationError):
            calibrate_rates((0.0, 50.0, 50.0))

    def test_mix_must_sum_to_100(self):
        """Percentages must add up."""
        with pytest.raises(CalibrationError, match="sum"):
            calibrate_rates((30.0, 30.0, 30.0))

    def test_unreachable_event_share(self):
        """Too many events for the at-risk fraction."""
        with pytest.raises(CalibrationError):
            calibrate_rates((80.0, 15.0, 5.0), at_risk_end=0.2)

    def test_simulated_mix(self, calibrated_spec: DGPSpec):
        """A large simulated cohort reproduces the target mix."""
        cohort = generate_cohort(calibrated_spec.with_size(50_000, seed=1))

        for got, want in zip(event_mix(cohort), TABLE1_MIX):
            assert got == pytest.approx(want, abs=1.0)


class TestCoverageStudy:
    """Tests for coverage_study on small grids."""

    @pytest.fixture(scope="class")
    def report(self, calibrated_spec: DGPSpec):
        """Tiny study: 2 sizes, 2 schemes, both band types."""
        return coverage_study(
            calibrated_spec, [80, 120], [SchemeKind.WEIRD, SchemeKind.NORMAL], list(BandType),
            nsim=6, reps=49, interval=(0.5, 5.0), alpha=0.05, seed=13,
        )

    def test_cells(self, report):
        """One row per (n, scheme, band type)."""
        assert len(report.rows) == 2 * 2 * 2
        for row in report.rows:
            assert row["runs"] + row["skipped"] == 6
            assert 0 <= row["coverage"] <= 100

    def test_event_mix_sums_to_100(self, report):
        """Average event mixes are percentages."""
        for mix in report.event_mix.values():
            assert sum(mix) == pytest.approx(100.0)

    def test_deterministic_across_threads(self, calibrated_spec: DGPSpec, report):
        """The report depends on the seed only."""
        again = coverage_study(
            calibrated_spec, [80, 120], [SchemeKind.WEIRD, SchemeKind.NORMAL], list(BandType),
            nsim=6, reps=49, interval=(0.5, 5.0), alpha=0.05, seed=13, threads=3,
        )

        assert again.rows == report.rows

    def test_alpha_one_degenerates(self, calibrated_spec: DGPSpec):
        """alpha = 1 gives near-degenerate bands that rarely cover."""
        report = coverage_study(
            calibrated_spec, [300], [SchemeKind.WEIRD], [BandType.HALL_WELLNER],
            nsim=20, reps=19, interval=(0.5, 5.0), alpha=1.0, seed=2,
        )

        assert report.rows[0]["coverage"] <= 25.0

    def test_run_hook(self, calibrated_spec: DGPSpec):
        """on_run fires once per simulated cohort, whatever the thread count."""
        calls = []
        coverage_study(
            calibrated_spec, [80, 100], [SchemeKind.WEIRD], [BandType.EQUAL_PRECISION],
            nsim=3, reps=9, interval=(0.5, 5.0), alpha=0.05, seed=2, threads=2, on_run=lambda: calls.append(1),
        )

        assert len(calls) == 2 * 3

    def test_report_views(self, report):
        """Frame and dict views of the report."""
        assert set(report.to_frame().columns) >= {"n", "scheme", "band_type", "coverage", "mean_area"}
        assert report.to_dict()["parameters"]["seed"] == 13


class TestSizePowerStudy:
    """Tests for size_power_study."""

    def test_rows(self, calibrated_spec: DGPSpec):
        """One row per hypothesis and test kind."""
        alt = calibrated_spec.model_copy(update={"hazard1": 2 * calibrated_spec.hazard1})
        report = size_power_study(
            calibrated_spec, alt, 60, 60, [TestKind.KS, TestKind.CVM], nsim=4, reps=19, alpha=0.05, seed=3
        )

        assert [(r["hypothesis"], r["kind"]) for r in report.rows] == [
            ("null", "ks"), ("null", "cvm"), ("alternative", "ks"), ("alternative", "cvm"),
        ]
        for row in report.rows:
            assert 0 <= row["rejection_rate"] <= 100

    def test_run_hook(self, calibrated_spec: DGPSpec):
        """on_run fires once per run under each hypothesis."""
        calls = []
        size_power_study(
            calibrated_spec, calibrated_spec, 60, 60, [TestKind.KS], nsim=3, reps=9, alpha=0.05, seed=3,
            threads=2, on_run=lambda: calls.append(1),
        )

        assert len(calls) == 2 * 3
