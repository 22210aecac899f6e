"""Output writer for estimates, bands, test results and study reports."""

import json
import math
from enum import Enum
from pathlib import Path
from typing import Any

import numpy as np
import pandas as pd

from .. import __version__

FORMATS = ("csv", "json")


def run_metadata(command: str, flags: dict[str, Any], seed: int | None = None) -> dict:
    """Metadata block embedded in every output: version, flags and seed."""
    metadata: dict[str, Any] = {"tool": "cifboot", "version": __version__, "command": command}
    if seed is not None:
        metadata["seed"] = seed
    metadata["flags"] = flags
    return to_jsonable(metadata)


def to_jsonable(value: Any) -> Any:
    """Convert numpy, enum and path values; non-finite floats become strings."""
    if isinstance(value, dict):
        return {str(k): to_jsonable(v) for k, v in value.items()}
    if isinstance(value, list | tuple):
        return [to_jsonable(v) for v in value]
    if isinstance(value, np.ndarray):
        return [to_jsonable(v) for v in value.tolist()]
    if isinstance(value, np.bool_):
        return bool(value)
    if isinstance(value, np.integer):
        return int(value)
    if isinstance(value, float | np.floating):
        value = float(value)
        return value if math.isfinite(value) else str(value)
    if isinstance(value, Path):
        return str(value)
    if isinstance(value, Enum):
        return value.value
    return value


def render_json(document: dict) -> str:
    """UTF-8 JSON text in insertion order."""
    return json.dumps(to_jsonable(document), indent=2, ensure_ascii=False) + "\n"


def render_csv(table: pd.DataFrame, metadata: dict | None = None) -> str:
    """CSV text preceded by '# key: value' metadata lines."""
    lines = [f"# {key}: {json.dumps(to_jsonable(value), ensure_ascii=False)}" for key, value in (metadata or {}).items()]
    body = table.to_csv(index=False, float_format="%.12g", lineterminator="\n")
    return "".join(f"{line}\n" for line in lines) + body


def read_csv_metadata(path: Path) -> dict:
    """Parse the '# key: value' header written by render_csv."""
    metadata = {}
    with open(path, encoding="utf-8") as f:
        for line in f:
            if not line.startswith("# "):
                break
            key, _, value = line[2:].partition(": ")
            metadata[key] = json.loads(value)
    return metadata


class OutputWriter:
    """Write results as CSV tables or a single JSON document.

    Creates output structure:
    output/
    ├── <name>.json              (json format)
    └── <name>_<table>.csv ...   (csv format, one file per table)

    Documents without tables (test results, diagnostics) are always JSON.
    """

    def __init__(self, directory: Path | None = None, fmt: str = "csv"):
        """Initialize the writer.

        Args:
            directory: Output directory; None writes to standard output
            fmt: Table format, csv or json
        """
        if fmt not in FORMATS:
            raise ValueError(f"unknown output format '{fmt}', expected one of {FORMATS}")
        self.directory = Path(directory) if directory is not None else None
        self.fmt = fmt

    def write_tables(
        self,
        name: str,
        tables: dict[str, pd.DataFrame],
        metadata: dict,
        summary: dict | None = None,
    ) -> list[Path | str]:
        """Write named tables with their metadata.

        Args:
            name: Base name of the output
            tables: Table name -> data frame
            metadata: Run metadata (see run_metadata)
            summary: Scalar results, e.g. quantile and area of a band

        Returns:
            Written paths, or the rendered text when writing to stdout
        """
        header = {**metadata, **(summary or {})}
        if self.fmt == "json":
            document = {
                "metadata": metadata,
                **({"summary": summary} if summary else {}),
                "tables": {key: table.to_dict(orient="list") for key, table in tables.items()},
            }
            return [self._emit(f"{name}.json", render_json(document))]

        outputs = []
        for key, table in tables.items():
            filename = f"{name}.csv" if len(tables) == 1 else f"{name}_{key}.csv"
            outputs.append(self._emit(filename, render_csv(table, {**header, "table": key})))
        return outputs

    def write_document(self, name: str, document: dict, metadata: dict) -> Path | str:
        """Write a JSON document under a metadata key."""
        return self._emit(f"{name}.json", render_json({"metadata": metadata, **document}))

    def _emit(self, filename: str, text: str) -> Path | str:
        if self.directory is None:
            return text
        self.directory.mkdir(parents=True, exist_ok=True)
        path = self.directory / self._clean_name(filename)
        path.write_text(text, encoding="utf-8")
        return path

    @staticmethod
    def _clean_name(filename: str) -> str:
        """Restrict a file name to alphanumerics, '-', '_' and '.'."""
        name = "".join(c if c.isalnum() or c in "-_." else "_" for c in filename)
        while "__" in name:
            name = name.replace("__", "_")
        return name
