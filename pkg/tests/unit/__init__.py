"""
Unit tests package for RZF-SKETCH

Contains unit tests for individual services, models and utilities.
"""
