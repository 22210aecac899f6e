"""Weight vectors over the 2n counting-process slots.

Slot i (0-based, i < n) is the cause-1 process of subject i and slot n + i
its cause-2 process. A slot is active when its process jumps, so every
subject with an event owns exactly one active slot and censored subjects
own none.
"""

from dataclasses import dataclass

import numpy as np

from ..errors import DataValidationError
from ..types import Cohort, RiskTable, SchemeKind
from .base import MultiplierScheme, SlotMoments
from .registry import get_scheme


@dataclass(frozen=True, eq=False)
class SlotLayout:
    """Active slots in ascending slot order with Y at their jump."""

    n: int
    slot: np.ndarray
    at_risk: np.ndarray
    row: np.ndarray  # risk-table row of the jump

    @property
    def size(self) -> int:
        return int(self.slot.size)


@dataclass(frozen=True, eq=False)
class WeightDraw:
    """One realisation of the 2n DDMB weights; inactive slots carry 0."""

    weights: np.ndarray
    slot_active: np.ndarray

    @property
    def n(self) -> int:
        return self.weights.size // 2


def slot_layout(rt: RiskTable, cohort: Cohort) -> SlotLayout:
    """Locate the active slots of a cohort on its risk table."""
    if rt.n != cohort.n or not np.array_equal(np.sort(cohort.exit), rt.times):
        raise DataValidationError("risk table does not belong to this cohort")

    rows = np.flatnonzero(rt.events)
    subjects = rt.subject[rows]
    slots = np.where(rt.dN1[rows] == 1, subjects, cohort.n + subjects)
    order = np.argsort(slots, kind="stable")
    return SlotLayout(
        n=cohort.n,
        slot=slots[order],
        at_risk=rt.at_risk[rows][order],
        row=rows[order],
    )


def draw_weights(
    scheme: MultiplierScheme | SchemeKind | str,
    rt: RiskTable,
    cohort: Cohort,
    rng: np.random.Generator,
) -> WeightDraw:
    """Draw one DDMB weight vector.

    Exactly one value is drawn per active slot, in ascending slot order;
    inactive slots are set to 0.

    Args:
        scheme: Scheme instance or kind
        rt: Risk table of the cohort
        cohort: Cohort
        rng: Random stream

    Returns:
        Weight draw over all 2n slots
    """
    layout = slot_layout(rt, cohort)
    weights = np.zeros(2 * cohort.n)
    weights[layout.slot] = get_scheme(scheme).sample(layout.at_risk, rng)
    active = np.zeros(2 * cohort.n, dtype=bool)
    active[layout.slot] = True
    return WeightDraw(weights=weights, slot_active=active)


def conditional_moments(
    scheme: MultiplierScheme | SchemeKind | str, rt: RiskTable, cohort: Cohort
) -> SlotMoments:
    """Closed-form conditional moments of the active weights given the data."""
    layout = slot_layout(rt, cohort)
    mean, variance, fourth = get_scheme(scheme).moments(layout.at_risk)
    return SlotMoments(slot=layout.slot, mean=mean, variance=variance, fourth=fourth)
