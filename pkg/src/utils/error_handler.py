"""
Error Handler for RZF-SKETCH

Centralized error handling and command-line diagnostics.
"""

import logging
import traceback
from typing import Any, Dict, Optional

from pydantic import ValidationError

from ..exceptions import (
    ConfigError,
    ExperimentError,
    NumericalError,
    TrialFailedError,
)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_CONFIG = 2
EXIT_NUMERICAL = 3
EXIT_TRIAL = 4


class ErrorHandler:
    """
    Centralized error handler for the command-line runner.

    Translates exceptions into one-line diagnostics and process exit codes,
    logging the full traceback on the way.
    """

    def __init__(self):
        """Initialize the error handler."""
        self.logger = logging.getLogger(__name__)

    def handle_error(self, error: BaseException, context: Optional[str] = None) -> int:
        """
        Log an error and map it to an exit code.

        Args:
            error: Exception to handle
            context: Optional context information

        Returns:
            Exit code for the process
        """
        error_type = type(error).__name__
        log_message = f"Error: {error_type} - {error}"
        if context:
            log_message = f"{context}: {log_message}"
        self.logger.error(log_message, exc_info=error)
        return self.exit_code_for(error)

    @staticmethod
    def exit_code_for(error: BaseException) -> int:
        """
        Exit code associated with an exception type.

        Args:
            error: Exception raised by the run

        Returns:
            Process exit code
        """
        if isinstance(error, (ConfigError, ValidationError)):
            return EXIT_CONFIG
        if isinstance(error, NumericalError):
            return EXIT_NUMERICAL
        if isinstance(error, ExperimentError):
            return EXIT_TRIAL
        return EXIT_FAILURE

    def create_user_message(self, error: BaseException) -> str:
        """
        Create a one-line diagnostic for stderr.

        Args:
            error: Exception to describe

        Returns:
            Diagnostic message
        """
        if isinstance(error, TrialFailedError):
            return (
                f"Trial {error.trial} of scenario '{error.scenario}' failed "
                f"(trial seed {error.seed}): {error.message}"
            )
        if isinstance(error, ValidationError):
            first = error.errors()[0] if error.errors() else {}
            location = ".".join(str(part) for part in first.get("loc", ()))
            return f"Invalid configuration at '{location}': {first.get('msg', error)}"

        prefixes = {
            "ConfigValidationError": "Invalid configuration",
            "ConfigFileError": "Configuration file could not be read",
            "NonFiniteError": "Non-finite numerical value",
            "RankDeficiencyError": "Rank deficient channel embedding",
            "DimensionError": "Shape mismatch",
            "OracleSizeError": "Problem too large for the brute-force oracle",
            "FileNotFoundError": "File not found",
            "PermissionError": "Permission denied",
            "MemoryError": "Insufficient memory for this problem size",
        }
        message = getattr(error, "message", None) or str(error)
        prefix = prefixes.get(type(error).__name__)
        if prefix is None:
            return f"An error occurred: {message}"
        return f"{prefix}: {message}"

    def get_error_summary(self, error: BaseException) -> Dict[str, Any]:
        """
        Get a summary of an error.

        Args:
            error: Exception to summarize

        Returns:
            Dictionary containing error summary
        """
        return {
            "type": type(error).__name__,
            "message": str(error),
            "error_code": getattr(error, "error_code", None),
            "exit_code": self.exit_code_for(error),
            "traceback": "".join(
                traceback.format_exception(type(error), error, error.__traceback__)
            ),
        }
