"""CSV ingestion and tie preprocessing for competing-risks cohorts."""

from pathlib import Path

import numpy as np
import pandas as pd

from ..config import CsvSchemaConfig
from ..errors import DataValidationError
from ..log import get_logger
from ..types import Cohort

logger = get_logger(__name__)

# Header occupies line 1, so data row i (0-based) sits on line i + 2.
_FIRST_DATA_LINE = 2


def ingest_csv(path: str | Path, schema: CsvSchemaConfig | None = None) -> Cohort:
    """Read a competing-risks cohort from a CSV file.

    Required columns are the time and status columns; entry defaults to 0,
    group to 1 and id to the 1-based row number when absent.

    Args:
        path: Path to a UTF-8, comma-separated file with a header row
        schema: Column names; defaults to id, entry, time, status, group

    Returns:
        Validated cohort

    Raises:
        FileNotFoundError: If the file does not exist
        DataValidationError: On empty files, missing columns or invalid rows
    """
    schema = schema or CsvSchemaConfig()
    path = Path(path)
    if not path.is_file():
        raise FileNotFoundError(f"input file not found: {path}")

    try:
        df = pd.read_csv(path, dtype=str, skipinitialspace=True, encoding="utf-8")
    except pd.errors.EmptyDataError as e:
        raise DataValidationError(f"{path}: file is empty") from e
    except pd.errors.ParserError as e:
        raise DataValidationError(f"{path}: malformed CSV ({e})") from e

    if df.empty:
        raise DataValidationError(f"{path}: file has a header but no rows")

    df.columns = [str(c).strip() for c in df.columns]
    for required in (schema.time_column, schema.status_column):
        if required not in df.columns:
            raise DataValidationError(f"{path}: missing column '{required}'")

    n = len(df)
    time = _numeric_column(df, schema.time_column, float)
    status = _numeric_column(df, schema.status_column, int)
    entry = (
        _numeric_column(df, schema.entry_column, float)
        if schema.entry_column in df.columns
        else np.zeros(n)
    )
    group = (
        _numeric_column(df, schema.group_column, int)
        if schema.group_column in df.columns
        else np.ones(n, dtype=np.int64)
    )
    if schema.id_column in df.columns:
        ids = tuple(df[schema.id_column].fillna("").str.strip())
    else:
        ids = tuple(str(i + 1) for i in range(n))

    bad_status = np.flatnonzero(~np.isin(status, (0, 1, 2)))
    if bad_status.size:
        row = int(bad_status[0])
        raise DataValidationError(
            f"status {status[row]} outside {{0, 1, 2}}", line=row + _FIRST_DATA_LINE
        )
    bad_group = np.flatnonzero(~np.isin(group, (1, 2)))
    if bad_group.size:
        row = int(bad_group[0])
        raise DataValidationError(f"group {group[row]} outside {{1, 2}}", line=row + _FIRST_DATA_LINE)
    bad_entry = np.flatnonzero(entry < 0)
    if bad_entry.size:
        raise DataValidationError("entry < 0", line=int(bad_entry[0]) + _FIRST_DATA_LINE)
    bad_exit = np.flatnonzero(time <= entry)
    if bad_exit.size:
        row = int(bad_exit[0])
        raise DataValidationError(
            f"exit <= entry ({time[row]} <= {entry[row]})", line=row + _FIRST_DATA_LINE
        )

    cohort = Cohort(ids=ids, entry=entry, exit=time, cause=status, group=group)
    if cohort.event_count == 0:
        logger.warning("%s: no cause-1 or cause-2 events; estimators are degenerate", path)
    logger.debug("ingested %d subjects from %s", cohort.n, path)
    return cohort


def _numeric_column(df: pd.DataFrame, column: str, kind: type) -> np.ndarray:
    """Parse a string column, reporting the first unparsable line."""
    raw = df[column]
    values = pd.to_numeric(raw.str.strip(), errors="coerce").to_numpy(dtype=float)
    invalid = ~np.isfinite(values)
    if kind is int:
        invalid |= np.isfinite(values) & (values != np.round(values))
    if invalid.any():
        row = int(np.flatnonzero(invalid)[0])
        raise DataValidationError(
            f"column '{column}' has non-numeric value {raw.iloc[row]!r}",
            line=row + _FIRST_DATA_LINE,
        )
    return values.astype(np.int64) if kind is int else values


def break_ties(cohort: Cohort) -> Cohort:
    """Make exit times pairwise distinct by a deterministic rank jitter.

    Within a group of m subjects sharing exit time t, the k-th one in input
    order (k = 0, 1, ...) is moved to t + k * eps, where eps is half the
    smallest positive gap between distinct exit times divided by the largest
    tie-group size. Shifts stay below half a gap, so the order of distinct
    times and the multiset of causes are preserved. Tie-free cohorts are
    returned unchanged.

    Args:
        cohort: Any cohort

    Returns:
        Cohort with distinct exit times
    """
    exits = cohort.exit
    distinct, inverse, counts = np.unique(exits, return_inverse=True, return_counts=True)
    if distinct.size == exits.size:
        return cohort

    # A single distinct value has no gap; the value itself sets the scale.
    gap = float(np.min(np.diff(distinct))) if distinct.size > 1 else float(distinct[0])
    eps = 0.5 * gap / float(counts.max())

    # Rank within tie group in input order: stable sort by group index.
    order = np.argsort(inverse, kind="stable")
    starts = np.concatenate([[0], np.cumsum(counts)[:-1]])
    rank = np.empty(exits.size, dtype=np.int64)
    rank[order] = np.arange(exits.size) - np.repeat(starts, counts)

    logger.debug("broke %d ties with eps=%g", int(np.sum(counts - 1)), eps)
    return cohort.with_exit(exits + rank * eps)


def event_mix(cohort: Cohort) -> tuple[float, float, float]:
    """Percentages of type-1 events, type-2 events and censorings."""
    counts = np.bincount(cohort.cause, minlength=3).astype(float)
    pct = 100.0 * counts / cohort.n
    return float(pct[1]), float(pct[2]), float(pct[0])
