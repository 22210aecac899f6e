"""One-sample containment test and two-sample KS / CvM resampling tests."""

from collections.abc import Callable, Sequence

import numpy as np

from ..engine.components import ZComponents, components_for
from ..engine.paths import two_sample_grid, two_sample_paths
from ..errors import DataValidationError
from ..log import get_logger
from ..multipliers.base import MultiplierScheme
from ..multipliers.registry import get_scheme
from ..types import Adjust, BandType, Cohort, SchemeKind, StepFunction, TestKind, Transform
from .bands import BandFit, fit_band, loglog, path_multiplier
from .functionals import TestResult, decide, integral_functional, sup_functional

logger = get_logger(__name__)

WeightFn = Callable[[np.ndarray], np.ndarray]
Reference = StepFunction | Callable[[np.ndarray], np.ndarray]


def ks_from_fit(
    fit: BandFit,
    f_ref: Reference,
    band_type: BandType,
    alpha: float,
    transform: Transform = Transform.LOGLOG,
) -> TestResult:
    """Containment test of a reference CIF against a fitted band.

    The statistic is sup sqrt(n) |g| |phi(F1_hat) - phi(F_ref)| over the
    grid, which exceeds q exactly when F_ref leaves the band somewhere.
    """
    reference = np.broadcast_to(np.asarray(f_ref(fit.grid), dtype=float), fit.grid.shape)
    if np.any(np.isnan(reference)):
        raise DataValidationError("reference CIF is undefined (nan) on the interval")
    weight, _ = path_multiplier(fit.estimate, fit.sigma2, band_type, transform)
    if transform is Transform.LOGLOG:
        distance = np.abs(loglog(fit.estimate) - loglog(reference))
    else:
        distance = np.abs(fit.estimate - reference)
    # A CIF outside [0, 1] is never inside a band.
    distance = np.where((reference < 0.0) | (reference > 1.0), np.inf, distance)
    with np.errstate(invalid="ignore"):
        statistic = float(np.max(np.sqrt(fit.z.n) * np.abs(weight) * distance))
    return decide(
        "one_sample_ks",
        statistic,
        fit.sup_stats[band_type],
        alpha,
        band_type=band_type.value,
        transform=transform.value,
        scheme=fit.scheme,
        seed=fit.seed,
        interval=[float(fit.grid[0]), float(fit.grid[0] + fit.widths.sum())],
    )


def one_sample_ks(
    cohort: Cohort,
    f_ref: Reference,
    interval: tuple[float, float],
    scheme: MultiplierScheme | SchemeKind | str,
    reps: int,
    alpha: float,
    seed: int,
    band_type: BandType = BandType.EQUAL_PRECISION,
    transform: Transform = Transform.LOGLOG,
    *,
    threads: int = 1,
) -> TestResult:
    """Reject H0: F1 = F_ref when F_ref is not contained in the band.

    Args:
        cohort: Observations
        f_ref: Hypothesised CIF, a StepFunction or vectorised callable
        interval: (t1, t2)
        scheme: Multiplier scheme
        reps: Bootstrap replicates B
        alpha: Level
        seed: Master seed
        band_type: Band weight
        transform: CIF transformation
        threads: Worker threads

    Returns:
        Test result; replicate_stats are the sup statistics of the band
    """
    fit = fit_band(components_for(cohort), interval, scheme, reps, seed, (band_type,), threads=threads)
    return ks_from_fit(fit, f_ref, band_type, alpha, transform)


def _weights(weight_fn: WeightFn | None, grid: np.ndarray) -> np.ndarray:
    if weight_fn is None:
        return np.ones(grid.size)
    weights = np.broadcast_to(np.asarray(weight_fn(grid), dtype=float), grid.shape)
    if not np.all(np.isfinite(weights)) or np.any(weights <= 0):
        raise DataValidationError("weight function must be finite and positive on the interval")
    return np.array(weights)


def two_sample_from_components(
    z1: ZComponents,
    z2: ZComponents,
    interval: tuple[float, float],
    scheme: MultiplierScheme | SchemeKind | str,
    reps: int,
    alpha: float,
    seed: int,
    kinds: Sequence[TestKind] = (TestKind.KS, TestKind.CVM),
    weight_fn: WeightFn | None = None,
    adjust: Adjust = Adjust.NONE,
    *,
    threads: int = 1,
    key_prefix: tuple[int, ...] = (),
) -> dict[TestKind, TestResult]:
    """KS and CvM tests of F1 equality from one set of replicates.

    All requested functionals are reduced from the same weight streams, so
    KS and CvM results for a seed are always computed on identical draws.
    W is evaluated right-continuously on the joint grid and w at the grid
    points, so the CvM integral is exact for piecewise-constant weights.
    """
    resolved = get_scheme(scheme)
    grid, widths = two_sample_grid(z1, z2, interval)
    weights = _weights(weight_fn, grid)
    scale = np.sqrt(z1.n * z2.n / (z1.n + z2.n))
    observed = scale * (np.asarray(z1.f1(grid)) - np.asarray(z2.f1(grid)))

    functionals = {
        TestKind.KS: (sup_functional(weights), float(np.max(weights * np.abs(observed)))),
        TestKind.CVM: (
            integral_functional(weights, widths),
            float(np.sum(weights * np.square(observed) * widths)),
        ),
    }
    reducers = {kind.value: functionals[kind][0] for kind in kinds}
    paths = two_sample_paths(
        z1, z2, resolved, reps, interval, seed, adjust,
        threads=threads, keep_paths=False, reducers=reducers, key_prefix=key_prefix,
    )
    logger.debug("two-sample test: n1=%d, n2=%d, grid=%d", z1.n, z2.n, grid.size)

    results = {}
    for kind in kinds:
        results[kind] = decide(
            kind.value,
            functionals[kind][1],
            paths.statistics[kind.value],
            alpha,
            scheme=resolved.kind.value,
            seed=seed,
            n1=z1.n,
            n2=z2.n,
            interval=[float(interval[0]), float(interval[1])],
            weighted=weight_fn is not None,
            **paths.metadata,
        )
    return results


def two_sample_tests(
    cohort1: Cohort,
    cohort2: Cohort,
    interval: tuple[float, float],
    scheme: MultiplierScheme | SchemeKind | str,
    reps: int,
    alpha: float,
    seed: int,
    kinds: Sequence[TestKind] = (TestKind.KS, TestKind.CVM),
    weight_fn: WeightFn | None = None,
    adjust: Adjust = Adjust.NONE,
    *,
    threads: int = 1,
) -> dict[TestKind, TestResult]:
    """Two-sample tests of H=: F1 of group 1 equals F1 of group 2 on the interval."""
    return two_sample_from_components(
        components_for(cohort1), components_for(cohort2), interval, scheme, reps, alpha, seed,
        kinds, weight_fn, adjust, threads=threads,
    )


def two_sample_ks(
    cohort1: Cohort,
    cohort2: Cohort,
    interval: tuple[float, float],
    weight_fn: WeightFn | None,
    scheme: MultiplierScheme | SchemeKind | str,
    reps: int,
    alpha: float,
    seed: int,
    adjust: Adjust = Adjust.NONE,
    *,
    threads: int = 1,
) -> TestResult:
    """Kolmogorov-Smirnov-type test with statistic sup w |W|."""
    return two_sample_tests(
        cohort1, cohort2, interval, scheme, reps, alpha, seed, (TestKind.KS,), weight_fn, adjust, threads=threads
    )[TestKind.KS]


def two_sample_cvm(
    cohort1: Cohort,
    cohort2: Cohort,
    interval: tuple[float, float],
    weight_fn: WeightFn | None,
    scheme: MultiplierScheme | SchemeKind | str,
    reps: int,
    alpha: float,
    seed: int,
    adjust: Adjust = Adjust.NONE,
    *,
    threads: int = 1,
) -> TestResult:
    """Cramer-von Mises-type test with statistic integral of w W^2."""
    return two_sample_tests(
        cohort1, cohort2, interval, scheme, reps, alpha, seed, (TestKind.CVM,), weight_fn, adjust, threads=threads
    )[TestKind.CVM]
