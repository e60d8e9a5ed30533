"""Pydantic schemas for catalog data, run configuration and reports."""
