"""Parallel evaluation of one- and two-sample DDMB bootstrap paths."""

from collections.abc import Callable, Sequence
from dataclasses import dataclass, field

import numpy as np
from joblib import Parallel, delayed

from ..errors import InadmissibleIntervalError
from ..log import get_logger
from ..multipliers.base import MultiplierScheme
from ..multipliers.registry import get_scheme
from ..types import Adjust, SchemeKind
from .components import ZComponents
from .streams import derive_rng, describe_streams

logger = get_logger(__name__)

# Replicates per work item. Fixed so that the arithmetic is the same for
# every thread count.
CHUNK_SIZE = 64

Reducer = Callable[[np.ndarray], np.ndarray]


@dataclass
class BootstrapPaths:
    """Resampled processes on an evaluation grid.

    ``paths`` has shape (replicates, grid) unless the run was streaming,
    in which case only the reduced per-replicate ``statistics`` are kept.
    """

    grid: np.ndarray
    widths: np.ndarray
    paths: np.ndarray | None
    statistics: dict[str, np.ndarray]
    scheme: str
    reps: int
    seeds: dict
    scale: float
    factor: float = 1.0
    metadata: dict = field(default_factory=dict)

    def column(self, t: float) -> np.ndarray:
        """Replicate values at the grid point in force at time t."""
        if self.paths is None:
            raise ValueError("paths were not retained (streaming run)")
        idx = int(np.searchsorted(self.grid, t, side="right")) - 1
        if idx < 0:
            raise InadmissibleIntervalError(f"time {t} precedes the evaluation grid")
        return self.paths[:, idx]


def evaluation_grid(
    event_times: np.ndarray, t1: float, t2: float, require_events: bool = True
) -> tuple[np.ndarray, np.ndarray]:
    """Grid {t1} plus the event times in (t1, t2], and partition widths.

    Paths are constant between events, so suprema and integrals over
    [t1, t2] are exact on this grid. The last width runs up to t2.

    Args:
        event_times: Sorted event times
        t1: Left endpoint
        t2: Right endpoint
        require_events: Raise if no event lies in [t1, t2]

    Returns:
        (grid, widths)
    """
    if t1 > t2:
        raise InadmissibleIntervalError(f"empty interval [{t1}, {t2}]")
    events = np.asarray(event_times, dtype=float)
    in_interval = events[(events >= t1) & (events <= t2)]
    if require_events and in_interval.size == 0:
        raise InadmissibleIntervalError(f"no events in interval [{t1}, {t2}]")
    grid = np.concatenate([[t1], in_interval[in_interval > t1]])
    widths = np.diff(np.append(grid, t2))
    return grid, widths


def _chunks(reps: int) -> list[np.ndarray]:
    return [np.arange(start, min(start + CHUNK_SIZE, reps)) for start in range(0, reps, CHUNK_SIZE)]


def _draw(z: ZComponents, scheme: MultiplierScheme, seed: int, keys: Sequence[tuple[int, ...]]) -> np.ndarray:
    """Jump-ordered weights, one row per stream key."""
    weights = np.empty((len(keys), z.size))
    for row, key in enumerate(keys):
        weights[row] = z.to_grid_order(scheme.sample(z.layout.at_risk, derive_rng(seed, *key)))
    return weights


def _run_chunks(
    block_fn: Callable[[np.ndarray], np.ndarray],
    reps: int,
    threads: int,
    keep_paths: bool,
    reducers: dict[str, Reducer] | None,
) -> tuple[np.ndarray | None, dict[str, np.ndarray]]:
    reducers = reducers or {}

    def work(indices: np.ndarray):
        block = block_fn(indices)
        stats = {name: reduce(block) for name, reduce in reducers.items()}
        return (block if keep_paths else None), stats

    results = Parallel(n_jobs=threads, prefer="threads")(
        delayed(work)(indices) for indices in _chunks(reps)
    )
    paths = np.concatenate([r[0] for r in results], axis=0) if keep_paths else None
    statistics = {name: np.concatenate([r[1][name] for r in results]) for name in reducers}
    return paths, statistics


def one_sample_paths(
    z: ZComponents,
    scheme: MultiplierScheme | SchemeKind | str,
    reps: int,
    interval: tuple[float, float],
    seed: int,
    *,
    threads: int = 1,
    keep_paths: bool = True,
    reducers: dict[str, Reducer] | None = None,
    key_prefix: tuple[int, ...] = (),
) -> BootstrapPaths:
    """Evaluate sqrt(n) * sum D_i Z_i on the grid of an interval.

    Replicate b draws its weights from stream (seed, *key_prefix, b).

    Args:
        z: Z-components of the cohort
        scheme: Multiplier scheme
        reps: Number of replicates B
        interval: (t1, t2); t1 == t2 gives a single-point grid
        seed: Master seed
        threads: Worker threads; does not affect results
        keep_paths: Retain the full replicate x grid matrix
        reducers: Named per-replicate functionals computed chunk by chunk
        key_prefix: Leading stream-key components

    Returns:
        Bootstrap paths
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    resolved = get_scheme(scheme)
    t1, t2 = interval
    z.check_range(t1, t2)
    grid, widths = evaluation_grid(z.event_times, t1, t2, require_events=t1 < t2)
    scale = float(np.sqrt(z.n))

    def block(indices: np.ndarray) -> np.ndarray:
        weights = _draw(z, resolved, seed, [(*key_prefix, int(b)) for b in indices])
        return scale * z.weighted_sums(weights, grid)

    logger.debug("one-sample paths: B=%d, grid=%d, slots=%d", reps, grid.size, z.size)
    paths, statistics = _run_chunks(block, reps, threads, keep_paths, reducers)
    return BootstrapPaths(
        grid=grid,
        widths=widths,
        paths=paths,
        statistics=statistics,
        scheme=resolved.kind.value,
        reps=reps,
        seeds=describe_streams(seed, key_prefix, reps),
        scale=scale,
    )


def adjustment_factor(adjust: Adjust, z1: ZComponents, z2: ZComponents, t2: float) -> float:
    """Conservative multiplier for two-sample weights.

    COUNT uses 1 + |n1 - n2| / (n1 n2); RISK uses
    1 + |Y1 - Y2| / (Y1 Y2) with the numbers at risk at t2.
    """
    if adjust is Adjust.NONE:
        return 1.0
    if adjust is Adjust.COUNT:
        n1, n2 = z1.n, z2.n
        return 1.0 + abs(n1 - n2) / (n1 * n2)
    y1, y2 = z1.cohort.at_risk(t2), z2.cohort.at_risk(t2)
    if y1 == 0 or y2 == 0:
        raise InadmissibleIntervalError(f"no subjects at risk at t2={t2} in one of the groups")
    return 1.0 + abs(y1 - y2) / (y1 * y2)


def two_sample_grid(z1: ZComponents, z2: ZComponents, interval: tuple[float, float]):
    """Joint evaluation grid of two groups; both need events in the interval."""
    t1, t2 = interval
    z1.check_range(t1, t2)
    z2.check_range(t1, t2)
    evaluation_grid(z1.event_times, t1, t2)
    evaluation_grid(z2.event_times, t1, t2)
    return evaluation_grid(np.union1d(z1.event_times, z2.event_times), t1, t2)


def two_sample_paths(
    z1: ZComponents,
    z2: ZComponents,
    scheme: MultiplierScheme | SchemeKind | str,
    reps: int,
    interval: tuple[float, float],
    seed: int,
    adjust: Adjust = Adjust.NONE,
    *,
    threads: int = 1,
    keep_paths: bool = True,
    reducers: dict[str, Reducer] | None = None,
    key_prefix: tuple[int, ...] = (),
) -> BootstrapPaths:
    """Evaluate sqrt(n1 n2 / n) * (sum D1 Z1 + sum D2 Z2) on the joint grid.

    Group k of replicate b draws from stream (seed, *key_prefix, b, k), so
    different functionals of the same seed share identical weights.
    """
    if reps < 1:
        raise ValueError("reps must be >= 1")
    resolved = get_scheme(scheme)
    grid, widths = two_sample_grid(z1, z2, interval)
    n1, n2 = z1.n, z2.n
    scale = float(np.sqrt(n1 * n2 / (n1 + n2)))
    factor = adjustment_factor(adjust, z1, z2, interval[1])

    def block(indices: np.ndarray) -> np.ndarray:
        w1 = _draw(z1, resolved, seed, [(*key_prefix, int(b), 1) for b in indices])
        w2 = _draw(z2, resolved, seed, [(*key_prefix, int(b), 2) for b in indices])
        sums = z1.weighted_sums(factor * w1, grid) + z2.weighted_sums(factor * w2, grid)
        return scale * sums

    paths, statistics = _run_chunks(block, reps, threads, keep_paths, reducers)
    return BootstrapPaths(
        grid=grid,
        widths=widths,
        paths=paths,
        statistics=statistics,
        scheme=resolved.kind.value,
        reps=reps,
        seeds=describe_streams(seed, key_prefix, reps, groups=2),
        scale=scale,
        factor=factor,
        metadata={"adjust": adjust.value, "adjust_factor": factor},
    )


def bootstrap_covariance(
    z: ZComponents, scheme: MultiplierScheme | SchemeKind | str, s: float, t: float
) -> float:
    """Closed-form conditional covariance n * sum sigma_i^2 Z_i(s) Z_i(t)."""
    z.check_range(s, t)
    _, variance, _ = get_scheme(scheme).moments(z.layout.at_risk)
    zz = z.values(np.array([s, t]))
    return float(z.n * np.sum(z.to_grid_order(variance) * zz[:, 0] * zz[:, 1]))
