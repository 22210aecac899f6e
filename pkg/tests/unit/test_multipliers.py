"""Unit tests for multiplier schemes, weight layout and diagnostics."""

import numpy as np
import pytest

from cifboot.config import DiagnosticsConfig
from cifboot.engine import derive_rng
from cifboot.multipliers import (
    CenteredPoisson,
    MultiplierScheme,
    SchemeRegistry,
    StandardNormal,
    WeirdBinomial,
    conditional_moments,
    diagnose_conditions,
    draw_weights,
    get_scheme,
    slot_layout,
)
from cifboot.types import Cohort, RiskTable, SchemeKind


class TestSchemes:
    """Tests for the concrete schemes."""

    @pytest.mark.parametrize("scheme", [StandardNormal(), CenteredPoisson(), WeirdBinomial()])
    def test_sample_shape(self, scheme: MultiplierScheme):
        """One weight per active slot."""
        at_risk = np.array([10, 5, 3, 2])

        assert scheme.sample(at_risk, derive_rng(1)).shape == (4,)

    def test_normal_moments(self):
        """N(0, 1): mean 0, variance 1, fourth moment 3."""
        mean, var, fourth = StandardNormal().moments(np.array([4, 2]))

        np.testing.assert_array_equal(mean, [0.0, 0.0])
        np.testing.assert_array_equal(var, [1.0, 1.0])
        np.testing.assert_array_equal(fourth, [3.0, 3.0])

    def test_poisson_fourth_moment(self):
        """E[(P - 1)^4] = 1 + 3 = 4 for P ~ Poisson(1)."""
        _, var, fourth = CenteredPoisson().moments(np.array([7]))

        assert var[0] == 1.0
        assert fourth[0] == 4.0

    def test_weird_moments(self):
        """Binomial(Y, 1/Y) - 1 has variance 1 - 1/Y."""
        at_risk = np.array([1, 2, 10])
        _, var, fourth = WeirdBinomial().moments(at_risk)

        np.testing.assert_allclose(var, [0.0, 0.5, 0.9])
        # Y = 2: D = -1, 0, 1 with probs 1/4, 1/2, 1/4 -> E[D^4] = 1/2.
        assert fourth[1] == pytest.approx(0.5)

    def test_weird_single_at_risk_is_zero(self):
        """Y = 1 always gives weight 0."""
        draws = WeirdBinomial().sample(np.ones(50, dtype=int), derive_rng(3))

        np.testing.assert_array_equal(draws, 0.0)

    def test_weird_empirical_variance(self):
        """Sample variance of weird weights matches 1 - 1/Y."""
        draws = WeirdBinomial().sample(np.full(20000, 4), derive_rng(5))

        assert draws.mean() == pytest.approx(0.0, abs=0.03)
        assert draws.var() == pytest.approx(0.75, rel=0.05)

    def test_poisson_empirical_moments(self):
        """Centred Poisson(1) draws have mean 0 and variance 1."""
        draws = CenteredPoisson().sample(np.ones(1_000_000, dtype=int), derive_rng(7))

        assert draws.mean() == pytest.approx(0.0, abs=0.005)
        assert draws.var() == pytest.approx(1.0, rel=0.01)

    def test_repr(self):
        """repr names class and kind."""
        assert repr(WeirdBinomial()) == "<WeirdBinomial kind=weird>"
        assert WeirdBinomial.get_name() == "weirdbinomial"


class TestSchemeRegistry:
    """Tests for SchemeRegistry."""

    def test_default_registry(self, registry: SchemeRegistry):
        """All three schemes are registered."""
        assert len(registry) == 3
        assert set(registry.list_supported()) == set(SchemeKind)
        assert isinstance(registry.get("weird"), WeirdBinomial)

    def test_register(self, empty_registry: SchemeRegistry):
        """Registering makes a scheme retrievable by kind."""
        empty_registry.register(StandardNormal())

        assert SchemeKind.NORMAL in empty_registry
        assert SchemeKind.WEIRD not in empty_registry

    def test_missing_kind(self, empty_registry: SchemeRegistry):
        """Unregistered kinds raise KeyError."""
        with pytest.raises(KeyError, match="poisson"):
            empty_registry.get(SchemeKind.POISSON)

    def test_get_scheme_passes_instances(self):
        """Scheme instances resolve to themselves."""
        scheme = CenteredPoisson()

        assert get_scheme(scheme) is scheme
        assert get_scheme("normal").kind is SchemeKind.NORMAL

    def test_unknown_name(self):
        """Unknown names are rejected."""
        with pytest.raises(ValueError):
            get_scheme("gamma")


class TestWeights:
    """Tests for the slot layout and weight draws."""

    def test_layout(self, small_rt: RiskTable, small_cohort: Cohort):
        """Cause-1 events use slot i, cause-2 events slot n + i."""
        layout = slot_layout(small_rt, small_cohort)

        np.testing.assert_array_equal(layout.slot, [0, 3, 4, 6])
        np.testing.assert_array_equal(layout.at_risk, [5, 2, 1, 4])

    def test_draw_fills_active_slots_only(self, small_rt: RiskTable, small_cohort: Cohort):
        """Censored subjects and unused causes carry weight 0."""
        draw = draw_weights("normal", small_rt, small_cohort, derive_rng(2))

        assert draw.n == 5
        assert draw.slot_active.sum() == 4
        np.testing.assert_array_equal(draw.weights[~draw.slot_active], 0.0)

    def test_conditional_moments(self, small_rt: RiskTable, small_cohort: Cohort):
        """Moments are aligned with the active slots."""
        moments = conditional_moments("weird", small_rt, small_cohort)

        np.testing.assert_allclose(moments.variance, [0.8, 0.5, 0.0, 0.75])

    def test_draw_deterministic(self, small_rt: RiskTable, small_cohort: Cohort):
        """The same stream gives the same weights."""
        first = draw_weights("weird", small_rt, small_cohort, derive_rng(4, 1))
        second = draw_weights("weird", small_rt, small_cohort, derive_rng(4, 1))

        np.testing.assert_array_equal(first.weights, second.weights)

    def test_slots_uncorrelated(self, small_rt: RiskTable, small_cohort: Cohort):
        """Weights of distinct slots are pairwise uncorrelated."""
        rows = [
            draw_weights("poisson", small_rt, small_cohort, derive_rng(6, k)).weights
            for k in range(10_000)
        ]
        active = slot_layout(small_rt, small_cohort).slot
        corr = np.corrcoef(np.array(rows)[:, active], rowvar=False)

        off_diagonal = corr[~np.eye(active.size, dtype=bool)]
        assert np.max(np.abs(off_diagonal)) < 0.05


class TestDiagnostics:
    """Tests for diagnose_conditions."""

    def test_weird_variance_gap(self, small_rt: RiskTable, small_cohort: Cohort):
        """max |sigma^2 - 1| = 1 / min Y at an event."""
        report = diagnose_conditions("weird", small_rt, small_cohort)

        assert report.variance_gap == pytest.approx(1.0)
        assert report.min_at_risk == 1
        assert not report.passed

    def test_normal_passes_moment_checks(self, sim_z):
        """Normal weights are exactly centred with unit variance."""
        report = diagnose_conditions("normal", sim_z.rt, sim_z.cohort)

        assert report.scaled_mean == 0.0
        assert report.variance_gap == 0.0
        assert report.scaled_fourth == pytest.approx(3.0 / sim_z.n)
        assert report.variance_share == pytest.approx(1.0 / report.active_slots)

    def test_thresholds(self, sim_z):
        """Flags follow the configured thresholds."""
        strict = DiagnosticsConfig(max_variance_share=0.0)

        report = diagnose_conditions("normal", sim_z.rt, sim_z.cohort, strict)

        assert any("variance share" in flag for flag in report.flags)

    def test_surrogates_shrink_with_n(self, calibrated_spec):
        """Fourth-moment and variance-share surrogates fall as n grows."""
        from cifboot.data import build_risk_table
        from cifboot.simulation import generate_cohort

        reports = []
        for n in (100, 400, 1600):
            cohort = generate_cohort(calibrated_spec.with_size(n, seed=31))
            reports.append(diagnose_conditions("weird", build_risk_table(cohort), cohort))

        shares = [report.variance_share for report in reports]
        fourths = [report.scaled_fourth for report in reports]
        assert shares[0] > shares[1] > shares[2]
        assert fourths[0] > fourths[1] > fourths[2]

    def test_no_events(self):
        """Cohorts without events are flagged."""
        from cifboot.data import build_risk_table

        cohort = Cohort.from_arrays(exit=[1.0, 2.0], cause=[0, 0])
        report = diagnose_conditions("weird", build_risk_table(cohort), cohort)

        assert report.active_slots == 0
        assert "no active slots" in report.flags[0]

    def test_to_dict(self, small_rt: RiskTable, small_cohort: Cohort):
        """The dict view carries the pass flag."""
        data = diagnose_conditions("poisson", small_rt, small_cohort).to_dict()

        assert data["scheme"] == "poisson"
        assert "passed" in data
