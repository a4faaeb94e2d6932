"""Pydantic models for surfaces, blocks and reports."""
