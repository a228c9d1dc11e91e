"""Serialization of results to CSV and JSON."""
