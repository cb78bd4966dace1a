"""
Utilities package for RZF-SKETCH

Logging setup, error handling, seeded random streams and shared helpers.
"""
