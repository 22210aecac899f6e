"""Constant-hazard competing-risks data generation and rate calibration."""

import math

import numpy as np
from pydantic import BaseModel, Field, model_validator
from scipy.optimize import brentq

from ..engine.streams import derive_rng
from ..errors import CalibrationError
from ..types import Cohort


class DGPSpec(BaseModel):
    """Exponential competing-risks model with independent censoring.

    Event times are exponential with rate hazard1 + hazard2, the cause is
    drawn in proportion to the hazards, and censoring is
    min(Exp(censor_rate), admin_end).
    """

    model_config = {"frozen": True}

    hazard1: float = Field(ge=0, description="Cause-1 hazard")
    hazard2: float = Field(ge=0, description="Cause-2 hazard")
    censor_rate: float = Field(default=0.0, ge=0, description="Censoring hazard")
    admin_end: float = Field(default=5.0, gt=0, description="Administrative censoring time (may be inf)")
    n: int = Field(default=100, ge=1, description="Cohort size")
    seed: int = Field(default=0, ge=0, description="Master seed")

    @model_validator(mode="after")
    def _positive_total(self) -> "DGPSpec":
        if self.hazard1 + self.hazard2 <= 0:
            raise ValueError("hazard1 + hazard2 must be positive")
        return self

    @property
    def event_rate(self) -> float:
        return self.hazard1 + self.hazard2

    def with_size(self, n: int, seed: int | None = None) -> "DGPSpec":
        update: dict = {"n": n}
        if seed is not None:
            update["seed"] = seed
        return self.model_copy(update=update)


def generate_cohort(spec: DGPSpec, key: tuple[int, ...] = ()) -> Cohort:
    """Draw a cohort of spec.n subjects with entry 0.

    Args:
        spec: Data generating process
        key: Stream key; the cohort is a deterministic function of
            (spec.seed, key)

    Returns:
        Cohort
    """
    rng = derive_rng(spec.seed, *key)
    n = spec.n
    event = rng.exponential(1.0 / spec.event_rate, n)
    cause = np.where(rng.random(n) < spec.hazard1 / spec.event_rate, 1, 2)
    censor = rng.exponential(1.0 / spec.censor_rate, n) if spec.censor_rate > 0 else np.full(n, np.inf)
    censor = np.minimum(censor, spec.admin_end)

    observed = event <= censor
    return Cohort.from_arrays(
        exit=np.where(observed, event, censor),
        cause=np.where(observed, cause, 0),
    )


def true_cif(spec: DGPSpec, t: float | np.ndarray, cause: int = 1) -> float | np.ndarray:
    """F_j(t) = a_j / a * (1 - exp(-a t)) with a = hazard1 + hazard2."""
    hazard = spec.hazard1 if cause == 1 else spec.hazard2
    values = hazard / spec.event_rate * -np.expm1(-spec.event_rate * np.asarray(t, dtype=float))
    return float(values) if np.ndim(t) == 0 else values


def expected_mix(spec: DGPSpec) -> tuple[float, float, float]:
    """Expected type-1 / type-2 / censored percentages of spec."""
    total = spec.event_rate + spec.censor_rate
    observed = spec.event_rate / total
    if math.isfinite(spec.admin_end):
        observed *= -math.expm1(-total * spec.admin_end)
    pct1 = 100.0 * observed * spec.hazard1 / spec.event_rate
    pct2 = 100.0 * observed * spec.hazard2 / spec.event_rate
    return pct1, pct2, 100.0 - pct1 - pct2


def calibrate_rates(
    target_mix: tuple[float, float, float],
    admin_end: float = 5.0,
    at_risk_end: float = 0.08,
    censor_rate: float | None = None,
    n: int = 100,
    seed: int = 0,
) -> DGPSpec:
    """Find constant rates reproducing a type-1 / type-2 / censored mix.

    Three rates but two free proportions: unless censor_rate is given, the
    remaining degree of freedom is fixed by the fraction still at risk just
    before admin_end, exp(-(a + c) admin_end) = at_risk_end. With a forced
    censoring rate the event rate is found by root-finding.

    Args:
        target_mix: Percentages (type 1, type 2, censored), summing to 100
        admin_end: Administrative censoring time (may be inf)
        at_risk_end: Fraction at risk at admin_end
        censor_rate: Fixed censoring hazard, or None to calibrate it
        n: Cohort size of the returned spec
        seed: Seed of the returned spec

    Returns:
        Calibrated spec

    Raises:
        CalibrationError: If no positive hazard1 reproduces the target
    """
    pct1, pct2, pct_censored = target_mix
    if min(target_mix) < 0 or abs(pct1 + pct2 + pct_censored - 100.0) > 0.5:
        raise CalibrationError(f"target mix {target_mix} must be non-negative and sum to 100")
    if pct1 <= 0:
        raise CalibrationError("target has no type-1 events; hazard1 must be positive")
    p_event = (pct1 + pct2) / 100.0

    if censor_rate is None:
        if not math.isfinite(admin_end):
            # No administrative horizon: fix the time scale by a + c = 1.
            event_rate, censor = p_event, 1.0 - p_event
        else:
            if not 0 < at_risk_end < 1:
                raise CalibrationError("at_risk_end must lie in (0, 1)")
            total = -math.log(at_risk_end) / admin_end
            event_rate = p_event * total / (1.0 - at_risk_end)
            censor = total - event_rate
            if censor < -1e-12:
                raise CalibrationError(
                    f"{100 * p_event:.2f}% events cannot be reached with {100 * at_risk_end:.1f}% still at risk"
                )
            censor = max(censor, 0.0)
    else:
        censor = censor_rate
        event_rate = _solve_event_rate(p_event, censor, admin_end)

    return DGPSpec(
        hazard1=event_rate * pct1 / (pct1 + pct2),
        hazard2=event_rate * pct2 / (pct1 + pct2),
        censor_rate=censor,
        admin_end=admin_end,
        n=n,
        seed=seed,
    )


def _solve_event_rate(p_event: float, censor: float, admin_end: float) -> float:
    if not math.isfinite(admin_end):
        if censor == 0:
            if p_event < 1:
                raise CalibrationError("without censoring every subject has an event")
            return 1.0
        if p_event >= 1:
            raise CalibrationError("a positive censoring rate always censors some subjects")
        return p_event * censor / (1.0 - p_event)
    if p_event >= 1:
        raise CalibrationError("administrative censoring always censors some subjects")

    def gap(a: float) -> float:
        total = a + censor
        return a / total * -math.expm1(-total * admin_end) - p_event

    upper = 1.0
    while gap(upper) < 0:
        upper *= 2.0
        if upper > 1e12:
            raise CalibrationError(f"{100 * p_event:.2f}% events unreachable with censor_rate={censor}")
    return float(brentq(gap, 1e-15, upper, xtol=1e-14))
