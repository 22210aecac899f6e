"""Confidence bands and resampling tests built on bootstrap paths."""

from .bands import (
    BandFit,
    ConfidenceBand,
    PointwiseInterval,
    band_limits,
    band_weight,
    confidence_band,
    fit_band,
    gamma_paths,
    loglog,
    pointwise_ci,
)
from .functionals import TestResult, empirical_quantile, p_value
from .hypothesis import (
    ks_from_fit,
    one_sample_ks,
    two_sample_cvm,
    two_sample_from_components,
    two_sample_ks,
    two_sample_tests,
)

__all__ = [
    "BandFit",
    "ConfidenceBand",
    "PointwiseInterval",
    "TestResult",
    "band_limits",
    "band_weight",
    "confidence_band",
    "empirical_quantile",
    "fit_band",
    "gamma_paths",
    "ks_from_fit",
    "loglog",
    "one_sample_ks",
    "p_value",
    "pointwise_ci",
    "two_sample_cvm",
    "two_sample_from_components",
    "two_sample_ks",
    "two_sample_tests",
]
