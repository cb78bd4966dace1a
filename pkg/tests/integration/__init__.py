"""
Integration tests package for RZF-SKETCH

Contains end-to-end scenario runs and the acceptance suite.
"""
