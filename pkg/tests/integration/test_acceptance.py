"""Monte Carlo acceptance studies on the calibrated constant-hazard model.

These take minutes to tens of minutes; run with ``pytest --slow``.
"""

import numpy as np
import pytest

from cifboot.data import event_mix
from cifboot.errors import InadmissibleIntervalError
from cifboot.inference import one_sample_ks
from cifboot.simulation import DGPSpec, coverage_study, generate_cohort, size_power_study, true_cif
from cifboot.types import BandType, SchemeKind, TestKind

pytestmark = pytest.mark.slow

INTERVAL = (0.5, 5.0)


class TestCalibration:
    """Event mix of the calibrated model."""

    def test_large_sample_mix(self, calibrated_spec: DGPSpec):
        """Simulated mix within one point of the target at n = 50000."""
        cohort = generate_cohort(calibrated_spec.with_size(50_000, seed=1))

        assert event_mix(cohort) == pytest.approx((38.68, 20.06, 41.26), abs=1.0)


class TestCoverage:
    """Coverage of simultaneous bands."""

    @pytest.mark.parametrize("scheme", list(SchemeKind))
    def test_large_n_coverage(self, calibrated_spec: DGPSpec, scheme: SchemeKind):
        """Nominal 95% bands cover in [92.5, 96.5] at n = 636."""
        report = coverage_study(
            calibrated_spec, [636], [scheme], list(BandType), 1000, 999, INTERVAL, 0.05, 2015, threads=4
        )

        for row in report.rows:
            assert row["skipped"] == 0
            assert 92.5 <= row["coverage"] <= 96.5, row

    def test_coverage_trend(self, calibrated_spec: DGPSpec):
        """Coverage does not fall as n grows, up to Monte Carlo error."""
        report = coverage_study(
            calibrated_spec, [50, 100, 300, 636], [SchemeKind.WEIRD], [BandType.EQUAL_PRECISION],
            1000, 999, INTERVAL, 0.05, 2016, threads=4,
        )
        coverage = [row["coverage"] for row in report.rows]

        assert all(later >= earlier - 2.0 for earlier, later in zip(coverage, coverage[1:]))


class TestTwoSample:
    """Size and power of the two-sample tests."""

    def test_size(self, calibrated_spec: DGPSpec):
        """Both tests reject in [3.5, 6.5] per cent under equal CIFs."""
        report = size_power_study(
            calibrated_spec, calibrated_spec, 200, 200, [TestKind.KS, TestKind.CVM], 2000, 999, 0.05, 2017,
            threads=4,
        )

        for row in report.rows:
            assert 3.5 <= row["rejection_rate"] <= 6.5, row

    def test_power(self, calibrated_spec: DGPSpec):
        """Doubling the cause-1 hazard is detected at n = 300 per group."""
        alternative = calibrated_spec.model_copy(update={"hazard1": 2 * calibrated_spec.hazard1})

        report = size_power_study(
            calibrated_spec, alternative, 300, 300, [TestKind.KS, TestKind.CVM], 500, 999, 0.05, 2018, threads=4,
        )

        for row in report.rows:
            if row["hypothesis"] == "alternative":
                assert row["rejection_rate"] >= 80.0, row


class TestOneSample:
    """Containment test of the true CIF."""

    def test_size(self, calibrated_spec: DGPSpec):
        """True null at n = 300: rejection rate in [3, 8] per cent at the 5% level."""
        rejections = runs = 0
        for run in range(1000):
            cohort = generate_cohort(calibrated_spec.with_size(300), key=(run,))
            try:
                result = one_sample_ks(
                    cohort, lambda t: true_cif(calibrated_spec, np.asarray(t)), INTERVAL,
                    SchemeKind.WEIRD, 999, 0.05, 2019 + run, threads=4,
                )
            except InadmissibleIntervalError:
                continue
            runs += 1
            rejections += result.reject

        assert runs >= 990
        assert 3.0 <= 100.0 * rejections / runs <= 8.0
