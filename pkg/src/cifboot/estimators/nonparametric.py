"""Kaplan-Meier, Nelson-Aalen and Aalen-Johansen estimators on a risk table.

All estimators are step functions on the exit-time grid of the table.
Increments with Y = 0 are taken as 0 (0/0 := 0).
"""

import numpy as np

from ..types import RiskTable, StepFunction


def _check_cause(cause: int) -> None:
    if cause not in (1, 2):
        raise ValueError(f"cause must be 1 or 2, got {cause}")


def kaplan_meier(rt: RiskTable) -> StepFunction:
    """Product-limit estimator of P(T > t) for the all-cause event time."""
    factors = 1.0 - rt.hazard_increments(1) - rt.hazard_increments(2)
    return StepFunction(rt.times, np.cumprod(factors), value_before_first=1.0, name="survival")


def nelson_aalen(rt: RiskTable, cause: int) -> StepFunction:
    """Cumulative cause-specific hazard, sum of dN_j / Y."""
    _check_cause(cause)
    return StepFunction(
        rt.times, np.cumsum(rt.hazard_increments(cause)), value_before_first=0.0, name=f"hazard{cause}"
    )


def aalen_johansen(rt: RiskTable, cause: int) -> StepFunction:
    """Cumulative incidence F_j(t) = sum over t_k <= t of P(T > t_k-) dN_j / Y."""
    _check_cause(cause)
    survival = kaplan_meier(rt).values
    left = np.concatenate([[1.0], survival[:-1]])
    return StepFunction(
        rt.times, np.cumsum(left * rt.hazard_increments(cause)), value_before_first=0.0, name=f"cif{cause}"
    )


def left_values(f: StepFunction) -> np.ndarray:
    """Left limits of a step function at its own jump times."""
    return np.concatenate([[f.value_before_first], f.values[:-1]])
