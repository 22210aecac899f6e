"""Unit tests for ingestor."""
