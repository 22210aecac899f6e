"""Plug-in estimate of the limit covariance of the Aalen-Johansen process."""

from dataclasses import dataclass

import numpy as np

from ..errors import InadmissibleIntervalError
from ..types import RiskTable
from .nonparametric import aalen_johansen, left_values


@dataclass(frozen=True, eq=False)
class CovarianceGrid:
    """Estimated covariance of F1_hat over a set of time points.

    ``values[i, j]`` is zeta_hat(times[i], times[j]) / n, the covariance of
    the estimator itself; ``zeta`` rescales to the sqrt(n)-normalised process.
    """

    times: np.ndarray
    values: np.ndarray
    n: int

    @property
    def zeta(self) -> np.ndarray:
        return self.values * self.n

    @property
    def variances(self) -> np.ndarray:
        return np.diag(self.values)


def _check_range(rt: RiskTable, s: float) -> None:
    if s < 0 or s > rt.times[-1]:
        raise InadmissibleIntervalError(
            f"time {s} outside the observed range [0, {rt.times[-1]}]"
        )


def zeta_plugin(rt: RiskTable, s1: float, s2: float) -> float:
    """Plug-in covariance zeta_hat(s1, s2) of sqrt(n) (F1_hat - F1).

    Substitutes y(u) by Y(u)/n and alpha_j(u) du by dN_j(u)/Y(u), with left
    limits of S2_hat = 1 - F2_hat and F1_hat inside the sum.

    Args:
        rt: Risk table
        s1: First time point
        s2: Second time point

    Returns:
        Estimated covariance; symmetric in (s1, s2)

    Raises:
        InadmissibleIntervalError: If a time lies outside [0, last exit]
    """
    _check_range(rt, s1)
    _check_range(rt, s2)
    s1, s2 = min(s1, s2), max(s1, s2)

    f1 = aalen_johansen(rt, 1)
    f2 = aalen_johansen(rt, 2)
    f1_s1, f1_s2 = float(f1(s1)), float(f1(s2))

    upto = rt.times <= s1
    y = rt.at_risk[upto].astype(float)
    s2_left = 1.0 - left_values(f2)[upto]
    f1_left = left_values(f1)[upto]
    scale = rt.n / np.square(y)

    term1 = (s2_left - f1_s2) * (s2_left - f1_s1) * rt.dN1[upto] * scale
    term2 = (f1_left - f1_s2) * (f1_left - f1_s1) * rt.dN2[upto] * scale
    return float(np.sum(term1) + np.sum(term2))


def covariance_grid(rt: RiskTable, times: np.ndarray) -> CovarianceGrid:
    """Evaluate zeta_hat on all pairs of the given time points."""
    times = np.asarray(times, dtype=float)
    k = times.size
    values = np.empty((k, k))
    for i in range(k):
        for j in range(i, k):
            values[i, j] = values[j, i] = zeta_plugin(rt, times[i], times[j]) / rt.n
    return CovarianceGrid(times=times, values=values, n=rt.n)
