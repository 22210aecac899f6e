"""Output writers for cifboot results."""

from .writer import OutputWriter, read_csv_metadata, render_csv, render_json, run_metadata, to_jsonable

__all__ = ["OutputWriter", "read_csv_metadata", "render_csv", "render_json", "run_metadata", "to_jsonable"]
