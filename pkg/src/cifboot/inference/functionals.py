"""Quantiles, p-values and path functionals shared by bands and tests."""

import math
from dataclasses import dataclass, field

import numpy as np


@dataclass
class TestResult:
    """Outcome of a resampling test.

    ``reject`` is True exactly when ``statistic > critical_value``.
    """

    __test__ = False

    kind: str
    statistic: float
    critical_value: float
    alpha: float
    reject: bool
    p_value: float
    replicate_stats: np.ndarray
    metadata: dict = field(default_factory=dict)

    def to_dict(self, include_replicates: bool = False) -> dict:
        result = {
            "kind": self.kind,
            "statistic": self.statistic,
            "critical_value": self.critical_value,
            "alpha": self.alpha,
            "reject": self.reject,
            "p_value": self.p_value,
            "reps": int(self.replicate_stats.size),
            **self.metadata,
        }
        if include_replicates:
            result["replicate_stats"] = self.replicate_stats.tolist()
        return result


def empirical_quantile(values: np.ndarray, alpha: float) -> float:
    """Order statistic of rank ceil((1 - alpha)(B + 1)), clamped to [1, B].

    Args:
        values: B replicate statistics
        alpha: Level in (0, 1]

    Returns:
        Critical value
    """
    values = np.asarray(values, dtype=float)
    if values.size == 0:
        raise ValueError("no replicate values")
    if not 0 < alpha <= 1:
        raise ValueError(f"alpha must lie in (0, 1], got {alpha}")
    reps = values.size
    # Guard against (1 - alpha)(B + 1) landing a hair above an integer.
    rank = math.ceil((1.0 - alpha) * (reps + 1) - 1e-9)
    rank = min(max(rank, 1), reps)
    return float(np.sort(values)[rank - 1])


def p_value(statistic: float, values: np.ndarray) -> float:
    """(1 + #{replicates >= statistic}) / (B + 1)."""
    values = np.asarray(values, dtype=float)
    return float((1 + np.count_nonzero(values >= statistic)) / (values.size + 1))


def decide(kind: str, statistic: float, values: np.ndarray, alpha: float, **metadata) -> TestResult:
    """Assemble a TestResult from a statistic and its replicates."""
    critical = empirical_quantile(values, alpha)
    return TestResult(
        kind=kind,
        statistic=float(statistic),
        critical_value=critical,
        alpha=alpha,
        reject=bool(statistic > critical),
        p_value=p_value(statistic, values),
        replicate_stats=np.asarray(values, dtype=float),
        metadata=metadata,
    )


def sup_functional(weights: np.ndarray):
    """Per-replicate max_t |weights(t) path(t)|."""
    # Band multipliers g * phi'(F1) are negative; only their magnitude enters.
    weights = np.abs(np.asarray(weights, dtype=float))

    def reduce(block: np.ndarray) -> np.ndarray:
        return np.max(np.abs(block) * weights[None, :], axis=1)

    return reduce


def integral_functional(weights: np.ndarray, widths: np.ndarray):
    """Per-replicate integral of weights * path^2 over the grid partition."""
    cell = np.asarray(weights, dtype=float) * np.asarray(widths, dtype=float)

    def reduce(block: np.ndarray) -> np.ndarray:
        return np.square(block) @ cell

    return reduce
