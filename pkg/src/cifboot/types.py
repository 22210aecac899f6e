"""Core types for the cifboot package."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

import numpy as np
import pandas as pd

from .errors import DataValidationError


class SchemeKind(Enum):
    """Supported multiplier schemes."""

    NORMAL = "normal"  # i.i.d. N(0, 1)
    POISSON = "poisson"  # i.i.d. Poisson(1) - 1
    WEIRD = "weird"  # Binomial(Y, 1/Y) - 1 at the subject's exit time


class BandType(Enum):
    """Weight function of a simultaneous confidence band."""

    HALL_WELLNER = "hw"
    EQUAL_PRECISION = "ep"


class Transform(Enum):
    """Transformation applied to the CIF before building a band."""

    LOGLOG = "loglog"
    IDENTITY = "identity"


class Adjust(Enum):
    """Conservative rescaling of two-sample weights."""

    NONE = "none"
    COUNT = "count"  # 1 + |n1 - n2| / (n1 n2)
    RISK = "risk"  # 1 + |Y1 - Y2| / (Y1 Y2) at t2


class TestKind(Enum):
    """Two-sample test functionals."""

    __test__ = False

    KS = "ks"
    CVM = "cvm"


def _frozen(values: Any, dtype: Any) -> np.ndarray:
    array = np.array(values, dtype=dtype)
    array.setflags(write=False)
    return array


@dataclass(frozen=True)
class Observation:
    """One subject of a competing-risks cohort.

    ``entry`` is the left-truncation time, ``exit`` the event or censoring
    time and ``cause`` the observed cause (0 = censored).
    """

    id: str
    entry: float
    exit: float
    cause: int
    group: int = 1


@dataclass(frozen=True, eq=False)
class Cohort:
    """Column-oriented collection of observations.

    Arrays are read-only; every operation that changes the data returns a
    new cohort.
    """

    ids: tuple[str, ...]
    entry: np.ndarray
    exit: np.ndarray
    cause: np.ndarray
    group: np.ndarray

    def __post_init__(self):
        n = len(self.ids)
        object.__setattr__(self, "entry", _frozen(self.entry, float))
        object.__setattr__(self, "exit", _frozen(self.exit, float))
        object.__setattr__(self, "cause", _frozen(self.cause, np.int64))
        object.__setattr__(self, "group", _frozen(self.group, np.int64))

        for name in ("entry", "exit", "cause", "group"):
            if getattr(self, name).shape != (n,):
                raise DataValidationError(f"column '{name}' has {getattr(self, name).size} values, expected {n}")
        if n == 0:
            raise DataValidationError("cohort is empty")
        if np.any(~np.isin(self.cause, (0, 1, 2))):
            bad = int(np.flatnonzero(~np.isin(self.cause, (0, 1, 2)))[0])
            raise DataValidationError(f"subject {self.ids[bad]}: cause must be 0, 1 or 2")
        if np.any(self.entry < 0):
            bad = int(np.flatnonzero(self.entry < 0)[0])
            raise DataValidationError(f"subject {self.ids[bad]}: entry must be >= 0")
        if np.any(self.exit <= self.entry):
            bad = int(np.flatnonzero(self.exit <= self.entry)[0])
            raise DataValidationError(f"subject {self.ids[bad]}: exit <= entry")

    @classmethod
    def from_observations(cls, observations: Iterable[Observation]) -> Cohort:
        """Build a cohort from observation records."""
        obs = list(observations)
        return cls(
            ids=tuple(o.id for o in obs),
            entry=np.array([o.entry for o in obs], dtype=float),
            exit=np.array([o.exit for o in obs], dtype=float),
            cause=np.array([o.cause for o in obs], dtype=np.int64),
            group=np.array([o.group for o in obs], dtype=np.int64),
        )

    @classmethod
    def from_arrays(
        cls,
        exit: Sequence[float] | np.ndarray,
        cause: Sequence[int] | np.ndarray,
        entry: Sequence[float] | np.ndarray | None = None,
        group: Sequence[int] | np.ndarray | None = None,
        ids: Sequence[str] | None = None,
    ) -> Cohort:
        """Build a cohort from plain arrays; entry defaults to 0, group to 1."""
        exit_arr = np.asarray(exit, dtype=float)
        n = exit_arr.size
        return cls(
            ids=tuple(ids) if ids is not None else tuple(str(i + 1) for i in range(n)),
            entry=np.zeros(n) if entry is None else np.asarray(entry, dtype=float),
            exit=exit_arr,
            cause=np.asarray(cause, dtype=np.int64),
            group=np.ones(n, dtype=np.int64) if group is None else np.asarray(group, dtype=np.int64),
        )

    @property
    def n(self) -> int:
        """Number of subjects."""
        return len(self.ids)

    @property
    def observations(self) -> list[Observation]:
        """The cohort as a list of Observation records."""
        return [
            Observation(
                id=self.ids[i],
                entry=float(self.entry[i]),
                exit=float(self.exit[i]),
                cause=int(self.cause[i]),
                group=int(self.group[i]),
            )
            for i in range(self.n)
        ]

    @property
    def event_count(self) -> int:
        """Number of subjects with an observed event of either cause."""
        return int(np.count_nonzero(self.cause > 0))

    @property
    def has_ties(self) -> bool:
        """Whether two subjects share an exit time."""
        return np.unique(self.exit).size < self.n

    def subset(self, mask: np.ndarray) -> Cohort:
        """Return the cohort restricted to a boolean mask."""
        idx = np.flatnonzero(mask)
        return Cohort(
            ids=tuple(self.ids[i] for i in idx),
            entry=self.entry[idx],
            exit=self.exit[idx],
            cause=self.cause[idx],
            group=self.group[idx],
        )

    def split_by_group(self) -> dict[int, Cohort]:
        """Split the cohort by its group column."""
        return {int(g): self.subset(self.group == g) for g in np.unique(self.group)}

    def with_exit(self, exit: np.ndarray) -> Cohort:
        """Return a copy with replaced exit times."""
        return Cohort(ids=self.ids, entry=self.entry, exit=exit, cause=self.cause, group=self.group)

    def at_risk(self, t: float) -> int:
        """Number of subjects with entry < t <= exit."""
        return int(np.count_nonzero((self.entry < t) & (t <= self.exit)))


@dataclass(frozen=True, eq=False)
class RiskTable:
    """Counting-process summary of a tie-free cohort on its exit-time grid.

    Row k describes the k-th smallest exit time: ``at_risk[k]`` is Y(t_k),
    ``dN1[k]``/``dN2[k]`` flag a cause-1/cause-2 event, and ``subject[k]``
    is the cohort index of the subject exiting at t_k.
    """

    times: np.ndarray
    at_risk: np.ndarray
    dN1: np.ndarray
    dN2: np.ndarray
    subject: np.ndarray
    n: int

    def __post_init__(self):
        for name in ("times", "at_risk", "dN1", "dN2", "subject"):
            array = getattr(self, name)
            array.setflags(write=False)

    def __len__(self) -> int:
        return int(self.times.size)

    @property
    def events(self) -> np.ndarray:
        """Event indicator of either cause per grid row."""
        return (self.dN1 + self.dN2) > 0

    @property
    def event_times(self) -> np.ndarray:
        """Grid times with an observed event."""
        return self.times[self.events]

    def hazard_increments(self, cause: int) -> np.ndarray:
        """Nelson-Aalen increments dN_j / Y with 0/0 := 0."""
        dN = self.dN1 if cause == 1 else self.dN2
        return np.divide(dN, self.at_risk, out=np.zeros(self.times.size), where=self.at_risk > 0)


@dataclass(frozen=True, eq=False)
class StepFunction:
    """Right-continuous piecewise-constant function.

    The value at t is ``values[k]`` for the largest ``times[k] <= t`` and
    ``value_before_first`` on [0, times[0]).
    """

    times: np.ndarray
    values: np.ndarray
    value_before_first: float = 0.0
    name: str = field(default="value", compare=False)

    def __post_init__(self):
        times = np.asarray(self.times, dtype=float)
        values = np.asarray(self.values, dtype=float)
        if times.shape != values.shape:
            raise DataValidationError("step function times and values differ in length")
        if times.size > 1 and np.any(np.diff(times) <= 0):
            raise DataValidationError("step function times must be strictly increasing")
        object.__setattr__(self, "times", _frozen(times, float))
        object.__setattr__(self, "values", _frozen(values, float))

    def __call__(self, t: float | np.ndarray) -> float | np.ndarray:
        idx = np.searchsorted(self.times, t, side="right") - 1
        return self._lookup(idx)

    def left_limit(self, t: float | np.ndarray) -> float | np.ndarray:
        """Value just before t."""
        idx = np.searchsorted(self.times, t, side="left") - 1
        return self._lookup(idx)

    def _lookup(self, idx):
        if np.ndim(idx) == 0:
            return float(self.values[idx]) if idx >= 0 else float(self.value_before_first)
        padded = np.concatenate([[self.value_before_first], self.values])
        return padded[np.asarray(idx) + 1]

    def to_frame(self) -> pd.DataFrame:
        """Two-column table (time, value)."""
        return pd.DataFrame({"time": self.times, self.name: self.values})

    def to_dict(self) -> dict[str, Any]:
        """JSON-friendly representation."""
        return {
            "times": self.times.tolist(),
            "values": self.values.tolist(),
            "value_before_first": float(self.value_before_first),
        }

    @classmethod
    def from_frame(cls, df: pd.DataFrame, value_before_first: float = 0.0) -> StepFunction:
        """Read a step function from a table with columns (time, value)."""
        if df.shape[1] < 2:
            raise DataValidationError("step function table needs two columns (time, value)")
        ordered = df.sort_values(df.columns[0])
        return cls(
            times=ordered.iloc[:, 0].to_numpy(dtype=float),
            values=ordered.iloc[:, 1].to_numpy(dtype=float),
            value_before_first=value_before_first,
            name=str(df.columns[1]),
        )
