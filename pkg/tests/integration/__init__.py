"""Integration tests for Phase 2."""
