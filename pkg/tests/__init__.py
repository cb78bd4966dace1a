"""
Tests package for RZF-SKETCH

Contains the unit, integration and acceptance test modules.
"""
