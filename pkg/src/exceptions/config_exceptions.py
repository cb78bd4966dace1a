"""
Configuration Exceptions for RZF-SKETCH

Custom exception classes for channel and experiment configuration handling.
"""

from typing import Optional


class ConfigError(Exception):
    """Base exception for configuration problems."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        """
        Initialize configuration error.

        Args:
            message: Error message
            error_code: Optional error code
        """
        super().__init__(message)
        self.message = message
        self.error_code = error_code


class ConfigValidationError(ConfigError):
    """Exception raised when a configuration value violates its constraints."""

    def __init__(self, message: str, field: Optional[str] = None):
        """
        Initialize configuration validation error.

        Args:
            message: Error message
            field: Name of the offending field
        """
        super().__init__(message, "CONFIG_VALIDATION_ERROR")
        self.field = field


class ConfigFileError(ConfigError):
    """Exception raised when a configuration document cannot be read or parsed."""

    def __init__(self, message: str, file_path: Optional[str] = None):
        """
        Initialize configuration file error.

        Args:
            message: Error message
            file_path: Path of the configuration document
        """
        super().__init__(message, "CONFIG_FILE_ERROR")
        self.file_path = file_path
