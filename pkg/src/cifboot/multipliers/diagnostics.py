"""Finite-sample surrogates of the weight conditions for bootstrap validity."""

from dataclasses import asdict, dataclass, field

import numpy as np

from ..config import DiagnosticsConfig
from ..types import Cohort, RiskTable, SchemeKind
from .base import MultiplierScheme
from .registry import get_scheme
from .weights import conditional_moments


@dataclass
class DiagnosticReport:
    """Weight diagnostics for one scheme on one data set."""

    scheme: str
    n: int
    active_slots: int
    scaled_mean: float  # max |mu_i| * sqrt(n)
    variance_gap: float  # max |sigma_i^2 - 1|
    scaled_fourth: float  # max E[D_i^4] / n
    variance_share: float  # max sigma_i^2 / sum sigma_j^2
    min_at_risk: int
    flags: list[str] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return not self.flags

    def to_dict(self) -> dict:
        return {**asdict(self), "passed": self.passed}


def diagnose_conditions(
    scheme: MultiplierScheme | SchemeKind | str,
    rt: RiskTable,
    cohort: Cohort,
    thresholds: DiagnosticsConfig | None = None,
) -> DiagnosticReport:
    """Evaluate the moment conditions on the weights of a given data set.

    Reports the centring, unit-variance and fourth-moment surrogates and the
    largest share of a single slot in the total conditional variance, and
    flags every value above its configured threshold.

    Args:
        scheme: Scheme instance or kind
        rt: Risk table
        cohort: Cohort
        thresholds: Flagging thresholds

    Returns:
        Diagnostic report
    """
    thresholds = thresholds or DiagnosticsConfig()
    resolved = get_scheme(scheme)
    moments = conditional_moments(resolved, rt, cohort)
    n = cohort.n

    if moments.slot.size == 0:
        return DiagnosticReport(
            scheme=resolved.kind.value, n=n, active_slots=0, scaled_mean=0.0,
            variance_gap=0.0, scaled_fourth=0.0, variance_share=0.0, min_at_risk=0,
            flags=["no active slots: cohort has no events"],
        )

    total_variance = float(np.sum(moments.variance))
    report = DiagnosticReport(
        scheme=resolved.kind.value,
        n=n,
        active_slots=int(moments.slot.size),
        scaled_mean=float(np.max(np.abs(moments.mean)) * np.sqrt(n)),
        variance_gap=float(np.max(np.abs(moments.variance - 1.0))),
        scaled_fourth=float(np.max(moments.fourth) / n),
        variance_share=float(np.max(moments.variance) / total_variance) if total_variance > 0 else 1.0,
        min_at_risk=int(np.min(rt.at_risk[rt.events])),
    )

    if report.scaled_mean > thresholds.max_scaled_mean:
        report.flags.append(f"max |mu| * sqrt(n) = {report.scaled_mean:.4g}")
    if report.variance_gap > thresholds.max_variance_gap:
        report.flags.append(f"max |sigma^2 - 1| = {report.variance_gap:.4g}")
    if thresholds.max_scaled_fourth is not None and report.scaled_fourth > thresholds.max_scaled_fourth:
        report.flags.append(f"max E[D^4] / n = {report.scaled_fourth:.4g}")
    if report.variance_share > thresholds.max_variance_share:
        report.flags.append(f"max variance share = {report.variance_share:.4g}")
    return report
