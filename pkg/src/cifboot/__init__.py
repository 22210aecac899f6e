"""cifboot - Data-dependent multiplier bootstrap for competing-risks cumulative incidence."""

__version__ = "0.1.0"

from .config import CifbootConfig, load_config
from .data import break_ties, build_risk_table, event_mix, ingest_csv
from .engine import components_for, one_sample_paths, precompute_z, two_sample_paths
from .errors import CalibrationError, CifbootError, DataValidationError, InadmissibleIntervalError
from .estimators import aalen_johansen, kaplan_meier, nelson_aalen, sigma2_hat, zeta_plugin
from .inference import (
    ConfidenceBand,
    TestResult,
    confidence_band,
    empirical_quantile,
    one_sample_ks,
    pointwise_ci,
    two_sample_cvm,
    two_sample_ks,
)
from .multipliers import SchemeRegistry, create_default_registry, diagnose_conditions, get_scheme
from .types import Adjust, BandType, Cohort, Observation, RiskTable, SchemeKind, StepFunction, TestKind, Transform

__all__ = [
    # Version
    "__version__",
    # Types
    "Observation",
    "Cohort",
    "RiskTable",
    "StepFunction",
    "SchemeKind",
    "BandType",
    "Transform",
    "Adjust",
    "TestKind",
    # Errors
    "CifbootError",
    "DataValidationError",
    "InadmissibleIntervalError",
    "CalibrationError",
    # Config
    "CifbootConfig",
    "load_config",
    # Data
    "ingest_csv",
    "break_ties",
    "event_mix",
    "build_risk_table",
    # Estimators
    "kaplan_meier",
    "nelson_aalen",
    "aalen_johansen",
    "zeta_plugin",
    "sigma2_hat",
    # Multipliers
    "SchemeRegistry",
    "create_default_registry",
    "get_scheme",
    "diagnose_conditions",
    # Engine
    "precompute_z",
    "components_for",
    "one_sample_paths",
    "two_sample_paths",
    # Inference
    "ConfidenceBand",
    "TestResult",
    "confidence_band",
    "pointwise_ci",
    "empirical_quantile",
    "one_sample_ks",
    "two_sample_ks",
    "two_sample_cvm",
]
