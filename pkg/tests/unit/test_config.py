"""Unit tests for configuration loading."""

from pathlib import Path

import pytest
from pydantic import ValidationError

from cifboot.config import (
    DEFAULT_SEED,
    SEED_ENV_VAR,
    BandConfig,
    BootstrapConfig,
    CifbootConfig,
    CsvSchemaConfig,
    DiagnosticsConfig,
    SimulationConfig,
    load_config,
)
from cifboot.types import Adjust, BandType, SchemeKind, Transform


class TestBootstrapConfig:
    """Tests for BootstrapConfig."""

    def test_default_values(self, monkeypatch: pytest.MonkeyPatch):
        """Weird scheme, 999 replicates, built-in seed."""
        monkeypatch.delenv(SEED_ENV_VAR, raising=False)
        config = BootstrapConfig()

        assert config.scheme is SchemeKind.WEIRD
        assert config.reps == 999
        assert config.seed == DEFAULT_SEED
        assert config.threads == 1
        assert config.adjust is Adjust.NONE

    def test_seed_from_environment(self, monkeypatch: pytest.MonkeyPatch):
        """$CIFBOOT_SEED provides the default seed."""
        monkeypatch.setenv(SEED_ENV_VAR, "42")

        assert BootstrapConfig().seed == 42

    def test_string_values(self):
        """CLI strings are converted to enums."""
        config = BootstrapConfig(scheme="poisson", adjust="risk")

        assert config.scheme is SchemeKind.POISSON
        assert config.adjust is Adjust.RISK

    def test_invalid_reps(self):
        """At least one replicate."""
        with pytest.raises(ValidationError):
            BootstrapConfig(reps=0)


class TestBandConfig:
    """Tests for BandConfig."""

    def test_default_values(self):
        """EP log-log 95% band on [0.5, 5]."""
        config = BandConfig()

        assert config.band_type is BandType.EQUAL_PRECISION
        assert config.transform is Transform.LOGLOG
        assert config.alpha == 0.05
        assert config.interval == (0.5, 5.0)

    def test_reversed_interval(self):
        """t1 > t2 is rejected."""
        with pytest.raises(ValidationError, match="t1 <= t2"):
            BandConfig(interval=(5.0, 1.0))

    def test_alpha_range(self):
        """alpha in (0, 1]."""
        with pytest.raises(ValidationError):
            BandConfig(alpha=0.0)


class TestOtherSections:
    """Tests for the remaining sections."""

    def test_csv_defaults(self):
        """Default column names."""
        config = CsvSchemaConfig()

        assert (config.time_column, config.status_column, config.group_column) == ("time", "status", "group")

    def test_diagnostics_defaults(self):
        """Fourth moments are not gated by default."""
        assert DiagnosticsConfig().max_scaled_fourth is None

    def test_simulation_defaults(self):
        """Smoke grid and the event mix of the reference study."""
        config = SimulationConfig()

        assert config.n_list == [100, 636]
        assert config.target_mix == (38.68, 20.06, 41.26)
        assert config.admin_end == 5.0


class TestCifbootConfig:
    """Tests for the top-level config and YAML round trips."""

    def test_yaml_round_trip(self, tmp_path: Path):
        """to_yaml and from_yaml preserve values."""
        config = CifbootConfig(bootstrap=BootstrapConfig(reps=99, seed=7), band=BandConfig(alpha=0.1))
        path = tmp_path / "config.yaml"

        config.to_yaml(path)
        loaded = CifbootConfig.from_yaml(path)

        assert loaded.bootstrap.reps == 99
        assert loaded.bootstrap.seed == 7
        assert loaded.band.alpha == 0.1

    def test_partial_yaml(self, tmp_path: Path):
        """Missing sections keep their defaults."""
        path = tmp_path / "partial.yaml"
        path.write_text("bootstrap:\n  scheme: normal\n")

        config = CifbootConfig.from_yaml(path)

        assert config.bootstrap.scheme is SchemeKind.NORMAL
        assert config.band.band_type is BandType.EQUAL_PRECISION

    def test_empty_yaml(self, tmp_path: Path):
        """An empty file gives the defaults."""
        path = tmp_path / "empty.yaml"
        path.write_text("")

        assert CifbootConfig.from_yaml(path).bootstrap.reps == 999

    def test_load_config_explicit_path(self, tmp_path: Path):
        """An explicit path wins over the search path."""
        path = tmp_path / "custom.yaml"
        path.write_text("verbose: true\n")

        assert load_config(path).verbose is True

    def test_load_config_defaults(self, tmp_path: Path, monkeypatch: pytest.MonkeyPatch):
        """Without config files the defaults are returned."""
        monkeypatch.chdir(tmp_path)
        monkeypatch.setenv("HOME", str(tmp_path))

        assert load_config() == CifbootConfig()

    def test_shipped_default_config(self):
        """configs/default.yaml parses into the defaults."""
        path = Path(__file__).parents[2] / "configs" / "default.yaml"

        config = load_config(path)

        assert config.bootstrap.scheme is SchemeKind.WEIRD
        assert config.band.interval == (0.5, 5.0)
        assert config.simulation.at_risk_end == 0.08
