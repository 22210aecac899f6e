"""DDMB variance of the Aalen-Johansen estimator on the log(1 - F1) scale."""

from __future__ import annotations

from typing import TYPE_CHECKING

import numpy as np

from ..errors import InadmissibleIntervalError
from ..multipliers.registry import get_scheme
from ..types import SchemeKind, StepFunction

if TYPE_CHECKING:
    from ..engine.components import ZComponents
    from ..engine.paths import BootstrapPaths
    from ..multipliers.base import MultiplierScheme


def sigma2_hat(
    z: ZComponents,
    scheme: MultiplierScheme | SchemeKind | str,
    t: float | np.ndarray,
) -> float | np.ndarray:
    """sigma2_hat(t) = n * sum_i sigma_i^2 Z_i(t)^2 / (1 - F1_hat(t))^2.

    Uses the closed-form conditional variances of the scheme's weights, so
    it equals the conditional variance of the resampled process divided by
    (1 - F1_hat(t))^2.

    Args:
        z: Z-components of the cohort
        scheme: Multiplier scheme
        t: Time point or array of time points

    Returns:
        Variance estimate(s)

    Raises:
        InadmissibleIntervalError: If F1_hat(t) = 1 at some requested point
    """
    points = np.atleast_1d(np.asarray(t, dtype=float))
    f1 = np.asarray(z.f1(points))
    if np.any(f1 >= 1.0):
        raise InadmissibleIntervalError("transformation undefined: F1_hat(t) = 1")

    _, variance, _ = get_scheme(scheme).moments(z.layout.at_risk)
    result = z.conditional_variance(points, z.to_grid_order(variance)) / np.square(1.0 - f1)
    return float(result[0]) if np.ndim(t) == 0 else result


def sigma2_hat_mc(
    paths: BootstrapPaths, f1: StepFunction, t: float | np.ndarray
) -> float | np.ndarray:
    """Monte Carlo counterpart of sigma2_hat from retained bootstrap paths.

    Accepts the same scalar or array times as sigma2_hat, so
    ``sigma2_hat_mc(paths, f1, paths.grid)`` can feed ``gamma_paths``.
    """
    points = np.atleast_1d(np.asarray(t, dtype=float))
    f1t = np.asarray(f1(points), dtype=float)
    if np.any(f1t >= 1.0):
        raise InadmissibleIntervalError("transformation undefined: F1_hat(t) = 1")
    spread = np.array([np.var(paths.column(point)) for point in points])
    result = spread / np.square(1.0 - f1t)
    return float(result[0]) if np.ndim(t) == 0 else result
