"""Ingestion and preprocessing of competing-risks observations."""

from .ingest import break_ties, event_mix, ingest_csv
from .risk_table import build_risk_table

__all__ = ["ingest_csv", "break_ties", "event_mix", "build_risk_table"]
