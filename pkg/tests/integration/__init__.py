"""Integration tests for ingestor."""
