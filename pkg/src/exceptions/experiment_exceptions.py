"""
Experiment Exceptions for RZF-SKETCH

Custom exception classes for the experiment harness.
"""

from typing import Optional


class ExperimentError(Exception):
    """Base exception for experiment execution."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        """
        Initialize experiment error.

        Args:
            message: Error message
            error_code: Optional error code
        """
        super().__init__(message)
        self.message = message
        self.error_code = error_code


class TrialFailedError(ExperimentError):
    """Exception raised when a single seeded trial aborts."""

    def __init__(
        self,
        message: str,
        scenario: Optional[str] = None,
        trial: Optional[int] = None,
        seed: Optional[int] = None,
    ):
        """
        Initialize trial failure.

        Args:
            message: Error message
            scenario: Scenario the trial belonged to
            trial: Trial index within the run
            seed: Entropy of the trial stream, for single-trial replay
        """
        super().__init__(message, "TRIAL_FAILED")
        self.scenario = scenario
        self.trial = trial
        self.seed = seed
