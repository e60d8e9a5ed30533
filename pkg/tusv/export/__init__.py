"""Tabular export of witness lists and survivor tables."""
