"""Synthetic data and Monte Carlo studies."""

from .dgp import DGPSpec, calibrate_rates, expected_mix, generate_cohort, true_cif
from .studies import StudyReport, coverage_study, size_power_study

__all__ = [
    "DGPSpec",
    "StudyReport",
    "calibrate_rates",
    "coverage_study",
    "expected_mix",
    "generate_cohort",
    "size_power_study",
    "true_cif",
]
