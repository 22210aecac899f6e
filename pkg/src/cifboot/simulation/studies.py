"""Monte Carlo coverage and two-sample size / power studies."""

from collections.abc import Callable, Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np
import pandas as pd
from joblib import Parallel, delayed

from ..data.ingest import event_mix
from ..engine.components import components_for
from ..errors import InadmissibleIntervalError
from ..inference.bands import fit_band
from ..inference.hypothesis import two_sample_from_components
from ..log import get_logger
from ..multipliers.registry import get_scheme
from ..types import Adjust, BandType, SchemeKind, TestKind, Transform
from .dgp import DGPSpec, generate_cohort, true_cif

logger = get_logger(__name__)

ProgressHook = Callable[[], None]


@dataclass
class StudyReport:
    """Tabular result of a simulation study.

    ``rows`` holds one record per cell; ``event_mix`` the average
    type-1 / type-2 / censored percentages per cohort size.
    """

    kind: str
    rows: list[dict]
    event_mix: dict[int, tuple[float, float, float]] = field(default_factory=dict)
    parameters: dict = field(default_factory=dict)

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame(self.rows)

    def to_dict(self) -> dict:
        return {
            "kind": self.kind,
            "parameters": self.parameters,
            "event_mix": {
                str(n): {"type1": mix[0], "type2": mix[1], "censored": mix[2]}
                for n, mix in sorted(self.event_mix.items())
            },
            "rows": self.rows,
        }


def _collect(tasks: Iterable, threads: int, on_run: ProgressHook | None) -> list:
    """Run delayed tasks on threads in order, calling on_run as each finishes."""
    results = []
    for result in Parallel(n_jobs=threads, prefer="threads", return_as="generator")(tasks):
        results.append(result)
        if on_run is not None:
            on_run()
    return results


def _coverage_run(
    spec: DGPSpec,
    run: int,
    schemes: Sequence[SchemeKind],
    band_types: Sequence[BandType],
    reps: int,
    interval: tuple[float, float],
    alpha: float,
    transform: Transform,
) -> tuple[tuple[float, float, float], dict]:
    cohort = generate_cohort(spec, key=(spec.n, run))
    z = components_for(cohort)
    outcome: dict = {}
    for index, scheme in enumerate(schemes):
        try:
            fit = fit_band(z, interval, scheme, reps, spec.seed, tuple(band_types), key_prefix=(spec.n, run, index))
        except InadmissibleIntervalError:
            for band_type in band_types:
                outcome[scheme, band_type] = None
            continue
        truth = true_cif(spec, fit.grid)
        for band_type in band_types:
            band = fit.band(band_type, alpha, transform)
            outcome[scheme, band_type] = (band.contains(truth), band.area)
    return event_mix(cohort), outcome


def coverage_study(
    spec: DGPSpec,
    n_list: Sequence[int],
    schemes: Sequence[SchemeKind | str],
    band_types: Sequence[BandType],
    nsim: int,
    reps: int,
    interval: tuple[float, float],
    alpha: float,
    seed: int,
    *,
    transform: Transform = Transform.LOGLOG,
    threads: int = 1,
    on_run: ProgressHook | None = None,
) -> StudyReport:
    """Coverage of simultaneous bands for the true cause-1 CIF.

    Run r at size n draws its cohort from stream (seed, n, r) and its
    bootstrap weights from (seed, n, r, scheme index, b), so the report is
    a function of the seed alone. Runs are distributed over threads.
    A run counts as covered when the band contains the true CIF at every
    grid point; runs whose data make the interval inadmissible are
    reported as skipped and left out of the coverage denominator.

    Args:
        spec: Data generating process; n and seed are overridden
        n_list: Cohort sizes
        schemes: Multiplier schemes
        band_types: Band types
        nsim: Simulation runs per cohort size
        reps: Bootstrap replicates per run
        interval: (t1, t2)
        alpha: Level
        seed: Master seed
        transform: CIF transformation
        threads: Worker threads
        on_run: Called once per finished run, e.g. to advance a progress bar

    Returns:
        Report with one row per (n, scheme, band type)
    """
    kinds = [get_scheme(s).kind for s in schemes]
    band_types = list(band_types)
    rows: list[dict] = []
    mixes: dict[int, tuple[float, float, float]] = {}

    for n in n_list:
        sized = spec.with_size(n, seed)
        logger.info("coverage study: n=%d, %d runs", n, nsim)
        results = _collect(
            (
                delayed(_coverage_run)(sized, run, kinds, band_types, reps, interval, alpha, transform)
                for run in range(nsim)
            ),
            threads,
            on_run,
        )
        mixes[n] = tuple(float(x) for x in np.mean([mix for mix, _ in results], axis=0))

        for kind in kinds:
            for band_type in band_types:
                outcomes = [res[kind, band_type] for _, res in results if res[kind, band_type] is not None]
                used = len(outcomes)
                covered = sum(1 for hit, _ in outcomes if hit)
                rows.append(
                    {
                        "n": n,
                        "scheme": kind.value,
                        "band_type": band_type.value,
                        "runs": used,
                        "skipped": nsim - used,
                        "covered": covered,
                        "coverage": 100.0 * covered / used if used else float("nan"),
                        "mean_area": float(np.mean([area for _, area in outcomes])) if used else float("nan"),
                    }
                )

    return StudyReport(
        kind="coverage",
        rows=rows,
        event_mix=mixes,
        parameters={
            "spec": spec.model_dump(exclude={"n", "seed"}),
            "n_list": list(n_list),
            "schemes": [k.value for k in kinds],
            "band_types": [b.value for b in band_types],
            "nsim": nsim,
            "reps": reps,
            "interval": [float(interval[0]), float(interval[1])],
            "alpha": alpha,
            "transform": transform.value,
            "seed": seed,
        },
    )


def _two_sample_run(
    spec1: DGPSpec,
    spec2: DGPSpec,
    hypothesis: int,
    run: int,
    scheme: SchemeKind,
    kinds: Sequence[TestKind],
    reps: int,
    interval: tuple[float, float],
    alpha: float,
    adjust: Adjust,
) -> dict | None:
    cohort1 = generate_cohort(spec1, key=(hypothesis, run, 1))
    cohort2 = generate_cohort(spec2, key=(hypothesis, run, 2))
    try:
        results = two_sample_from_components(
            components_for(cohort1), components_for(cohort2), interval, scheme, reps, alpha, spec1.seed,
            kinds, None, adjust, key_prefix=(hypothesis, run),
        )
    except InadmissibleIntervalError:
        return None
    return {kind: result.reject for kind, result in results.items()}


def size_power_study(
    spec_null: DGPSpec,
    spec_alt: DGPSpec,
    n1: int,
    n2: int,
    kinds: Sequence[TestKind],
    nsim: int,
    reps: int,
    alpha: float,
    seed: int,
    *,
    scheme: SchemeKind | str = SchemeKind.WEIRD,
    interval: tuple[float, float] = (0.5, 5.0),
    adjust: Adjust = Adjust.NONE,
    threads: int = 1,
    on_run: ProgressHook | None = None,
) -> StudyReport:
    """Rejection rates of the two-sample tests under H= and an alternative.

    Under the null both groups come from spec_null; under the alternative
    group 2 comes from spec_alt.

    Returns:
        Report with one row per (hypothesis, test kind)
    """
    resolved = get_scheme(scheme).kind
    kinds = list(kinds)
    settings = {
        "null": (spec_null.with_size(n1, seed), spec_null.with_size(n2, seed)),
        "alternative": (spec_null.with_size(n1, seed), spec_alt.with_size(n2, seed)),
    }

    rows: list[dict] = []
    for hypothesis, (label, (spec1, spec2)) in enumerate(settings.items()):
        logger.info("two-sample study (%s): %d runs", label, nsim)
        results = _collect(
            (
                delayed(_two_sample_run)(spec1, spec2, hypothesis, run, resolved, kinds, reps, interval, alpha, adjust)
                for run in range(nsim)
            ),
            threads,
            on_run,
        )
        completed = [r for r in results if r is not None]
        for kind in kinds:
            rejections = sum(1 for r in completed if r[kind])
            rows.append(
                {
                    "hypothesis": label,
                    "kind": kind.value,
                    "runs": len(completed),
                    "skipped": nsim - len(completed),
                    "rejections": rejections,
                    "rejection_rate": 100.0 * rejections / len(completed) if completed else float("nan"),
                }
            )

    return StudyReport(
        kind="size_power",
        rows=rows,
        parameters={
            "spec_null": spec_null.model_dump(exclude={"n", "seed"}),
            "spec_alt": spec_alt.model_dump(exclude={"n", "seed"}),
            "n1": n1,
            "n2": n2,
            "kinds": [k.value for k in kinds],
            "scheme": resolved.value,
            "nsim": nsim,
            "reps": reps,
            "interval": [float(interval[0]), float(interval[1])],
            "alpha": alpha,
            "adjust": adjust.value,
            "seed": seed,
        },
    )
