"""Test suite for the conley-surf toolkit."""
