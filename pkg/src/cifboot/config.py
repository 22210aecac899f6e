"""Configuration management using Pydantic."""

import os
from pathlib import Path

from pydantic import BaseModel, Field, field_validator

from .types import Adjust, BandType, SchemeKind, Transform

SEED_ENV_VAR = "CIFBOOT_SEED"
DEFAULT_SEED = 20150101


def default_seed() -> int:
    """Seed from $CIFBOOT_SEED, falling back to the built-in default."""
    value = os.getenv(SEED_ENV_VAR)
    return int(value) if value else DEFAULT_SEED


class CsvSchemaConfig(BaseModel):
    """Column names of the input CSV."""

    id_column: str = Field(default="id", description="Subject identifier column (optional)")
    entry_column: str = Field(default="entry", description="Entry time column (optional)")
    time_column: str = Field(default="time", description="Event or censoring time column")
    status_column: str = Field(default="status", description="Cause column, 0 = censored")
    group_column: str = Field(default="group", description="Group column (optional)")


class BootstrapConfig(BaseModel):
    """Resampling configuration."""

    scheme: SchemeKind = Field(default=SchemeKind.WEIRD, description="Multiplier scheme")
    reps: int = Field(default=999, ge=1, description="Bootstrap replicates B")
    seed: int = Field(default_factory=default_seed, description="Master seed")
    threads: int = Field(default=1, ge=1, description="Worker threads")
    adjust: Adjust = Field(default=Adjust.NONE, description="Two-sample weight adjustment")


class BandConfig(BaseModel):
    """Confidence band configuration."""

    band_type: BandType = Field(default=BandType.EQUAL_PRECISION, description="Band weight function")
    transform: Transform = Field(default=Transform.LOGLOG, description="CIF transformation")
    alpha: float = Field(default=0.05, gt=0, le=1, description="Significance level")
    interval: tuple[float, float] = Field(default=(0.5, 5.0), description="Time interval [t1, t2]")

    @field_validator("interval")
    @classmethod
    def _ordered(cls, value: tuple[float, float]) -> tuple[float, float]:
        if value[0] > value[1]:
            raise ValueError("interval must satisfy t1 <= t2")
        return value


class DiagnosticsConfig(BaseModel):
    """Thresholds for the finite-sample weight diagnostics."""

    max_scaled_mean: float = Field(default=0.1, description="Flag max |mu| * sqrt(n) above this")
    max_variance_gap: float = Field(default=0.1, description="Flag max |sigma^2 - 1| above this")
    max_scaled_fourth: float | None = Field(
        default=None, description="Flag max E[D^4] / n above this (off by default)"
    )
    max_variance_share: float = Field(default=0.05, description="Flag max sigma_i^2 / sum sigma^2 above this")


class SimulationConfig(BaseModel):
    """Monte Carlo study configuration."""

    n_list: list[int] = Field(default=[100, 636], description="Cohort sizes")
    nsim: int = Field(default=1000, ge=1, description="Simulation runs per cell")
    target_mix: tuple[float, float, float] = Field(
        default=(38.68, 20.06, 41.26), description="Type-1 / type-2 / censored percentages"
    )
    admin_end: float = Field(default=5.0, gt=0, description="Administrative censoring time")
    at_risk_end: float = Field(default=0.08, gt=0, lt=1, description="Fraction at risk at admin_end")


class OutputConfig(BaseModel):
    """Output configuration."""

    directory: Path = Field(default=Path("./output"), description="Output directory")
    format: str = Field(default="csv", description="Table format (csv, json)")


class CifbootConfig(BaseModel):
    """Main configuration for cifboot."""

    csv: CsvSchemaConfig = Field(default_factory=CsvSchemaConfig)
    bootstrap: BootstrapConfig = Field(default_factory=BootstrapConfig)
    band: BandConfig = Field(default_factory=BandConfig)
    diagnostics: DiagnosticsConfig = Field(default_factory=DiagnosticsConfig)
    simulation: SimulationConfig = Field(default_factory=SimulationConfig)
    output: OutputConfig = Field(default_factory=OutputConfig)
    verbose: bool = Field(default=False, description="Verbose output")

    @classmethod
    def from_yaml(cls, path: Path) -> "CifbootConfig":
        """Load configuration from YAML file.

        Args:
            path: Path to YAML file

        Returns:
            Loaded configuration
        """
        import yaml

        with open(path) as f:
            data = yaml.safe_load(f)

        return cls(**data) if data else cls()

    def to_yaml(self, path: Path) -> None:
        """Save configuration to YAML file.

        Args:
            path: Path to save to
        """
        import yaml

        with open(path, "w") as f:
            yaml.dump(self.model_dump(mode="json"), f, default_flow_style=False)


def load_config(path: Path | None = None) -> CifbootConfig:
    """Load configuration from file or return defaults.

    Args:
        path: Optional path to config file

    Returns:
        Configuration
    """
    if path and path.exists():
        return CifbootConfig.from_yaml(path)

    default_paths = [
        Path("./cifboot.yaml"),
        Path("./configs/default.yaml"),
        Path.home() / ".config" / "cifboot" / "config.yaml",
    ]

    for default_path in default_paths:
        if default_path.exists():
            return CifbootConfig.from_yaml(default_path)

    return CifbootConfig()
