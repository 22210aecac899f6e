"""Simultaneous confidence bands and pointwise intervals for a CIF.

A band over [t1, t2] is built from the resampled process

    gamma(t) = g(t) * phi'(F1_hat(t)) * W(t)

where W is the bootstrap path, phi the transformation and g the band
weight. With q the (1 - alpha) quantile of sup |gamma| the band is
phi^{-1}(phi(F1_hat) -/+ q / (sqrt(n) |g|)).
"""

from dataclasses import dataclass, field

import numpy as np
import pandas as pd

from ..engine.components import ZComponents, components_for
from ..engine.paths import BootstrapPaths, evaluation_grid, one_sample_paths
from ..errors import InadmissibleIntervalError
from ..estimators.variance import sigma2_hat
from ..log import get_logger
from ..multipliers.base import MultiplierScheme
from ..multipliers.registry import get_scheme
from ..types import BandType, Cohort, SchemeKind, StepFunction, Transform
from .functionals import empirical_quantile, sup_functional

logger = get_logger(__name__)


def loglog(x: np.ndarray) -> np.ndarray:
    """phi(x) = log(-log(1 - x)); -inf at 0 and +inf at 1."""
    x = np.asarray(x, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        return np.log(-np.log1p(-x))


def loglog_derivative(x: np.ndarray) -> np.ndarray:
    """phi'(x) = 1 / ((1 - x)(-log(1 - x)))."""
    x = np.asarray(x, dtype=float)
    return 1.0 / ((1.0 - x) * -np.log1p(-x))


def band_weight(f1: np.ndarray, sigma2: np.ndarray, band_type: BandType) -> np.ndarray:
    """Log-log scale band weight g.

    Equal precision: log(1 - F1) / sigma; Hall-Wellner: log(1 - F1) / (1 + sigma^2).
    """
    log_surv = np.log1p(-np.asarray(f1, dtype=float))
    if band_type is BandType.EQUAL_PRECISION:
        return log_surv / np.sqrt(sigma2)
    return log_surv / (1.0 + np.asarray(sigma2, dtype=float))


def path_multiplier(
    f1: np.ndarray, sigma2: np.ndarray, band_type: BandType, transform: Transform
) -> tuple[np.ndarray, np.ndarray]:
    """Weight g on the transform's own scale and the factor g * phi'(F1).

    The identity transform carries the weight over to the linear scale,
    g_lin = g * phi'(F1), so both transforms resample the same process.

    Returns:
        (weight, multiplier of W)
    """
    g = band_weight(f1, sigma2, band_type)
    multiplier = g * loglog_derivative(f1)
    weight = g if transform is Transform.LOGLOG else multiplier
    return weight, multiplier


def band_limits(
    estimate: np.ndarray, weight: np.ndarray, q: float, n: int, transform: Transform
) -> tuple[np.ndarray, np.ndarray]:
    """Lower and upper band limits, clipped into [0, 1]."""
    half = q / (np.sqrt(n) * np.abs(weight))
    if transform is Transform.LOGLOG:
        surv = 1.0 - estimate
        lower = 1.0 - surv ** np.exp(-half)
        upper = 1.0 - surv ** np.exp(half)
    else:
        lower, upper = estimate - half, estimate + half
    return np.clip(lower, 0.0, 1.0), np.clip(upper, 0.0, 1.0)


def gamma_paths(
    paths: BootstrapPaths,
    f1: StepFunction,
    sigma2: np.ndarray,
    band_type: BandType,
    transform: Transform = Transform.LOGLOG,
) -> np.ndarray:
    """Resampled band process g * phi'(F1_hat) * W on the grid of paths.

    Args:
        paths: Retained one-sample bootstrap paths
        f1: Aalen-Johansen estimate of the cause-1 CIF
        sigma2: sigma2_hat on paths.grid
        band_type: Band weight
        transform: CIF transformation

    Returns:
        Array of shape (replicates, grid)
    """
    if paths.paths is None:
        raise ValueError("paths were not retained (streaming run)")
    estimate = np.asarray(f1(paths.grid))
    _check_transformable(estimate, np.asarray(sigma2))
    _, multiplier = path_multiplier(estimate, sigma2, band_type, transform)
    return paths.paths * multiplier[None, :]


def _check_transformable(estimate: np.ndarray, sigma2: np.ndarray | None = None) -> None:
    if estimate[0] <= 0.0 or estimate[-1] >= 1.0:
        raise InadmissibleIntervalError(
            "transformation undefined on interval: F1_hat must lie in (0, 1); shrink the interval"
        )
    if sigma2 is not None and np.any(sigma2 <= 0.0):
        raise InadmissibleIntervalError("zero variance estimate on interval; shrink the interval")


@dataclass
class ConfidenceBand:
    """Simultaneous band for the cause-1 CIF on a grid of [t1, t2].

    Limits are constant between grid points; ``area`` integrates
    upper - lower over the grid partition of the interval.
    """

    grid: np.ndarray
    estimate: np.ndarray
    lower: np.ndarray
    upper: np.ndarray
    widths: np.ndarray
    band_type: BandType
    transform: Transform
    quantile_q: float
    alpha: float
    area: float
    metadata: dict = field(default_factory=dict)

    @property
    def interval(self) -> tuple[float, float]:
        return float(self.grid[0]), float(self.grid[0] + self.widths.sum())

    def contains(self, values: np.ndarray) -> bool:
        """Whether values (aligned with the grid) lie inside the band."""
        values = np.asarray(values, dtype=float)
        return bool(np.all((self.lower <= values) & (values <= self.upper)))

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(
            {"time": self.grid, "estimate": self.estimate, "lower": self.lower, "upper": self.upper}
        )

    def summary(self) -> dict:
        t1, t2 = self.interval
        return {
            "band_type": self.band_type.value,
            "transform": self.transform.value,
            "alpha": self.alpha,
            "interval": [t1, t2],
            "quantile_q": self.quantile_q,
            "area": self.area,
            "grid_points": int(self.grid.size),
            **self.metadata,
        }


@dataclass
class BandFit:
    """Ingredients shared by every band built from one set of replicates."""

    z: ZComponents
    grid: np.ndarray
    widths: np.ndarray
    estimate: np.ndarray
    sigma2: np.ndarray
    sup_stats: dict[BandType, np.ndarray]
    scheme: str
    reps: int
    seed: int

    def band(self, band_type: BandType, alpha: float, transform: Transform = Transform.LOGLOG) -> ConfidenceBand:
        """Band of the given type and level from the fitted replicates."""
        weight, _ = path_multiplier(self.estimate, self.sigma2, band_type, transform)
        q = empirical_quantile(self.sup_stats[band_type], alpha)
        lower, upper = band_limits(self.estimate, weight, q, self.z.n, transform)
        return ConfidenceBand(
            grid=self.grid,
            estimate=self.estimate,
            lower=lower,
            upper=upper,
            widths=self.widths,
            band_type=band_type,
            transform=transform,
            quantile_q=q,
            alpha=alpha,
            area=float(np.sum((upper - lower) * self.widths)),
            metadata={"scheme": self.scheme, "reps": self.reps, "seed": self.seed, "n": self.z.n},
        )


def fit_band(
    z: ZComponents,
    interval: tuple[float, float],
    scheme: MultiplierScheme | SchemeKind | str,
    reps: int,
    seed: int,
    band_types: tuple[BandType, ...] = (BandType.HALL_WELLNER, BandType.EQUAL_PRECISION),
    *,
    threads: int = 1,
    key_prefix: tuple[int, ...] = (),
) -> BandFit:
    """Run the resampling for one or more band types in a single pass.

    Sup statistics are reduced chunk by chunk, so the replicate x grid
    matrix is never retained.

    Raises:
        InadmissibleIntervalError: If the interval has no events, F1_hat is
            0 at t1 or 1 at t2, nobody is at risk at t2, or sigma2_hat
            vanishes on the interval
    """
    t1, t2 = interval
    resolved = get_scheme(scheme)
    z.check_range(t1, t2)
    if z.cohort.at_risk(t2) == 0:
        raise InadmissibleIntervalError(f"no subjects at risk at t2={t2}; shrink the interval")

    # Grid first, so the weights are known before the replicates are drawn.
    grid, widths = evaluation_grid(z.event_times, t1, t2, require_events=t1 < t2)
    estimate = np.asarray(z.f1(grid))
    _check_transformable(estimate)
    sigma2 = np.asarray(sigma2_hat(z, resolved, grid))
    _check_transformable(estimate, sigma2)

    reducers = {}
    for band_type in band_types:
        _, multiplier = path_multiplier(estimate, sigma2, band_type, Transform.LOGLOG)
        reducers[band_type.value] = sup_functional(multiplier)

    paths = one_sample_paths(
        z, resolved, reps, interval, seed,
        threads=threads, keep_paths=False, reducers=reducers, key_prefix=key_prefix,
    )
    logger.debug("band fit: n=%d, grid=%d, scheme=%s", z.n, grid.size, resolved.kind.value)
    return BandFit(
        z=z,
        grid=grid,
        widths=widths,
        estimate=estimate,
        sigma2=sigma2,
        sup_stats={bt: paths.statistics[bt.value] for bt in band_types},
        scheme=resolved.kind.value,
        reps=reps,
        seed=seed,
    )


def confidence_band(
    cohort: Cohort,
    interval: tuple[float, float],
    scheme: MultiplierScheme | SchemeKind | str,
    band_type: BandType,
    reps: int,
    alpha: float,
    seed: int,
    transform: Transform = Transform.LOGLOG,
    *,
    threads: int = 1,
) -> ConfidenceBand:
    """Simultaneous (1 - alpha) band for the cause-1 CIF over interval.

    Args:
        cohort: Observations; ties are broken before fitting
        interval: (t1, t2)
        scheme: Multiplier scheme
        band_type: Hall-Wellner or equal precision
        reps: Bootstrap replicates B
        alpha: Level
        seed: Master seed
        transform: Log-log or identity
        threads: Worker threads; does not affect results

    Returns:
        Confidence band
    """
    fit = fit_band(components_for(cohort), interval, scheme, reps, seed, (band_type,), threads=threads)
    return fit.band(band_type, alpha, transform)


@dataclass
class PointwiseInterval:
    """Confidence interval for F1(s) at a single time."""

    time: float
    estimate: float
    lower: float
    upper: float
    alpha: float
    quantile_q: float
    metadata: dict = field(default_factory=dict)

    def to_dict(self) -> dict:
        return {
            "time": self.time,
            "estimate": self.estimate,
            "lower": self.lower,
            "upper": self.upper,
            "alpha": self.alpha,
            "quantile_q": self.quantile_q,
            **self.metadata,
        }


def pointwise_ci(
    cohort: Cohort,
    s: float,
    scheme: MultiplierScheme | SchemeKind | str,
    reps: int,
    alpha: float,
    seed: int,
    band_type: BandType = BandType.EQUAL_PRECISION,
    transform: Transform = Transform.LOGLOG,
    *,
    threads: int = 1,
) -> PointwiseInterval:
    """Band on the singleton interval [s, s].

    On a single point the band weight cancels, so band_type only matters
    through rounding.
    """
    band = confidence_band(cohort, (s, s), scheme, band_type, reps, alpha, seed, transform, threads=threads)
    return PointwiseInterval(
        time=float(s),
        estimate=float(band.estimate[0]),
        lower=float(band.lower[0]),
        upper=float(band.upper[0]),
        alpha=alpha,
        quantile_q=band.quantile_q,
        metadata={**band.metadata, "transform": transform.value},
    )
