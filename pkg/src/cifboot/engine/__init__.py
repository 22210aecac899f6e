"""Resampling engine: Z-decomposition and parallel bootstrap paths."""

from .components import ZComponents, components_for, precompute_z
from .paths import (
    BootstrapPaths,
    adjustment_factor,
    bootstrap_covariance,
    evaluation_grid,
    one_sample_paths,
    two_sample_grid,
    two_sample_paths,
)
from .streams import derive_rng

__all__ = [
    "ZComponents",
    "precompute_z",
    "components_for",
    "BootstrapPaths",
    "evaluation_grid",
    "one_sample_paths",
    "two_sample_grid",
    "two_sample_paths",
    "adjustment_factor",
    "bootstrap_covariance",
    "derive_rng",
]
