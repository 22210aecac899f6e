"""Linear decomposition of the resampled Aalen-Johansen process.

For a subject with an event of cause j at time T, its only active slot
contributes

    Z(s) = 1(T <= s) * (coef_const + coef_f1 * F1_hat(s))

with coef_f1 = -1/Y(T), and coef_const = S2_hat(T-)/Y(T) for cause 1,
F1_hat(T-)/Y(T) for cause 2. A bootstrap path is sqrt(n) * sum D_i Z_i(s).
"""

from dataclasses import dataclass

import numpy as np

from ..errors import InadmissibleIntervalError
from ..estimators.nonparametric import aalen_johansen, left_values
from ..multipliers.weights import SlotLayout, slot_layout
from ..types import Cohort, RiskTable, StepFunction


@dataclass(frozen=True, eq=False)
class ZComponents:
    """Per-slot coefficients of the Z-decomposition, in jump-time order.

    ``grid_order`` maps slot-ordered arrays (as drawn by a scheme) to the
    jump-time order used here: ``x_grid = x_slot[grid_order]``.
    """

    cohort: Cohort
    rt: RiskTable
    f1: StepFunction
    layout: SlotLayout
    grid_order: np.ndarray
    jump_time: np.ndarray
    cause: np.ndarray
    at_risk: np.ndarray
    coef_const: np.ndarray
    coef_f1: np.ndarray

    @property
    def n(self) -> int:
        return self.cohort.n

    @property
    def size(self) -> int:
        """Number of active slots."""
        return int(self.jump_time.size)

    @property
    def event_times(self) -> np.ndarray:
        return self.jump_time

    def to_grid_order(self, slot_ordered: np.ndarray) -> np.ndarray:
        """Reorder per-slot values (last axis) from slot order to jump order."""
        return slot_ordered[..., self.grid_order]

    def check_range(self, *points: float) -> None:
        last = float(self.rt.times[-1])
        for s in points:
            if s < 0 or s > last:
                raise InadmissibleIntervalError(f"time {s} outside the observed range [0, {last}]")

    def values(self, points: np.ndarray) -> np.ndarray:
        """Dense Z matrix, shape (active slots, points), jump order."""
        points = np.atleast_1d(np.asarray(points, dtype=float))
        f1 = np.asarray(self.f1(points))
        jumped = self.jump_time[:, None] <= points[None, :]
        return jumped * (self.coef_const[:, None] + self.coef_f1[:, None] * f1[None, :])

    def weighted_sums(self, weights: np.ndarray, points: np.ndarray) -> np.ndarray:
        """sum_i D_i Z_i(s) for each row of weights, via prefix sums.

        Three running sums over the jump-ordered slots (cause-1 constants,
        cause-2 constants, weights times -1/Y) are combined with F1_hat(s),
        so each row costs O(slots + points).

        Args:
            weights: Shape (replicates, active slots), jump order
            points: Evaluation times

        Returns:
            Shape (replicates, points)
        """
        weights = np.atleast_2d(weights)
        points = np.atleast_1d(np.asarray(points, dtype=float))
        reps = weights.shape[0]

        def prefix(values: np.ndarray) -> np.ndarray:
            return np.concatenate([np.zeros((reps, 1)), np.cumsum(values, axis=1)], axis=1)

        is_cause1 = self.cause == 1
        const1 = prefix(weights * np.where(is_cause1, self.coef_const, 0.0))
        const2 = prefix(weights * np.where(is_cause1, 0.0, self.coef_const))
        slope = prefix(weights * self.coef_f1)

        pos = np.searchsorted(self.jump_time, points, side="right")
        f1 = np.asarray(self.f1(points))
        return const1[:, pos] + const2[:, pos] + slope[:, pos] * f1[None, :]

    def conditional_variance(self, points: np.ndarray, variances: np.ndarray) -> np.ndarray:
        """n * sum_i sigma_i^2 Z_i(s)^2 at each point, via prefix sums.

        Args:
            points: Evaluation times
            variances: Per-slot conditional variances, jump order

        Returns:
            Array aligned with points
        """
        points = np.atleast_1d(np.asarray(points, dtype=float))
        a, b = self.coef_const, self.coef_f1
        aa = np.concatenate([[0.0], np.cumsum(variances * a * a)])
        ab = np.concatenate([[0.0], np.cumsum(variances * a * b)])
        bb = np.concatenate([[0.0], np.cumsum(variances * b * b)])
        pos = np.searchsorted(self.jump_time, points, side="right")
        f1 = np.asarray(self.f1(points))
        return self.n * (aa[pos] + 2.0 * f1 * ab[pos] + f1 * f1 * bb[pos])


def precompute_z(rt: RiskTable, cohort: Cohort) -> ZComponents:
    """Compute the Z-decomposition coefficients of a cohort.

    Args:
        rt: Risk table of the cohort
        cohort: Tie-free cohort

    Returns:
        Immutable Z-components
    """
    layout = slot_layout(rt, cohort)
    f1 = aalen_johansen(rt, 1)
    f2 = aalen_johansen(rt, 2)

    grid_order = np.argsort(layout.row, kind="stable")
    rows = layout.row[grid_order]
    cause = np.where(layout.slot[grid_order] < cohort.n, 1, 2)
    y = rt.at_risk[rows].astype(float)

    s2_left = 1.0 - left_values(f2)[rows]
    f1_left = left_values(f1)[rows]
    coef_const = np.where(cause == 1, s2_left, f1_left) / y

    return ZComponents(
        cohort=cohort,
        rt=rt,
        f1=f1,
        layout=layout,
        grid_order=grid_order,
        jump_time=rt.times[rows],
        cause=cause,
        at_risk=y,
        coef_const=coef_const,
        coef_f1=-1.0 / y,
    )


def components_for(cohort: Cohort) -> ZComponents:
    """Break ties, build the risk table and precompute Z for a raw cohort."""
    from ..data.ingest import break_ties
    from ..data.risk_table import build_risk_table

    prepared = break_ties(cohort)
    return precompute_z(build_risk_table(prepared), prepared)
