"""
Exceptions package for RZF-SKETCH

Contains all custom exception classes for proper error handling.
"""

from .config_exceptions import ConfigError, ConfigFileError, ConfigValidationError
from .experiment_exceptions import ExperimentError, TrialFailedError
from .numerical_exceptions import (
    DimensionError,
    NonFiniteError,
    NumericalError,
    OracleSizeError,
    RankDeficiencyError,
)

__all__ = [
    "ConfigError",
    "ConfigFileError",
    "ConfigValidationError",
    "DimensionError",
    "ExperimentError",
    "NonFiniteError",
    "NumericalError",
    "OracleSizeError",
    "RankDeficiencyError",
    "TrialFailedError",
]
