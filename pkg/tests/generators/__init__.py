"""Test data generators and oracles."""
