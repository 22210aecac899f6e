"""Counting-process representation of a cohort."""

import numpy as np

from ..errors import DataValidationError
from ..types import Cohort, RiskTable


def build_risk_table(cohort: Cohort) -> RiskTable:
    """Build the at-risk and event-count table on the exit-time grid.

    Y(t_k) counts subjects with entry < t_k <= exit, i.e. in the initial
    state just before t_k. Because exits are distinct, the subjects with
    exit >= t_k are exactly n - k, and those among them not yet entered are
    the ones with entry >= t_k.

    Args:
        cohort: Cohort with pairwise distinct exit times (see break_ties)

    Returns:
        Risk table with one row per subject

    Raises:
        DataValidationError: If exit times are tied
    """
    if cohort.has_ties:
        raise DataValidationError("exit times are tied; apply break_ties first")

    order = np.argsort(cohort.exit, kind="stable")
    times = cohort.exit[order]
    causes = cohort.cause[order]

    entered = np.searchsorted(np.sort(cohort.entry), times, side="left")
    at_risk = entered - np.arange(times.size)

    return RiskTable(
        times=times,
        at_risk=at_risk.astype(np.int64),
        dN1=(causes == 1).astype(np.int64),
        dN2=(causes == 2).astype(np.int64),
        subject=order.astype(np.int64),
        n=cohort.n,
    )
