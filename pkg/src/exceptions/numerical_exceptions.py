"""
Numerical Exceptions for RZF-SKETCH

Exceptions raised by the linear-algebra layer (solvers, embeddings, sketches).
"""

from typing import Optional, Sequence


class NumericalError(Exception):
    """Base exception for numerical failures."""

    def __init__(self, message: str, error_code: Optional[str] = None):
        """
        Initialize numerical error.

        Args:
            message: Error message
            error_code: Optional error code
        """
        super().__init__(message)
        self.message = message
        self.error_code = error_code


class NonFiniteError(NumericalError):
    """Exception raised when an input or intermediate quantity is NaN or infinite."""

    def __init__(self, message: str, quantity: Optional[str] = None):
        super().__init__(message, "NON_FINITE")
        self.quantity = quantity


class RankDeficiencyError(NumericalError):
    """Exception raised when a matrix has lower rank than an operation requires."""

    def __init__(self, message: str, rank: Optional[int] = None, required: Optional[int] = None):
        """
        Initialize rank deficiency error.

        Args:
            message: Error message
            rank: Detected numerical rank
            required: Rank the operation needs
        """
        super().__init__(message, "RANK_DEFICIENT")
        self.rank = rank
        self.required = required


class DimensionError(NumericalError):
    """Exception raised when array shapes do not conform."""

    def __init__(
        self,
        message: str,
        name: Optional[str] = None,
        shape: Optional[Sequence[int]] = None,
        expected: Optional[Sequence[int]] = None,
    ):
        super().__init__(message, "DIMENSION_MISMATCH")
        self.name = name
        self.shape = tuple(shape) if shape is not None else None
        self.expected = tuple(expected) if expected is not None else None


class OracleSizeError(NumericalError):
    """Exception raised when a brute-force oracle is asked for a problem above its size cap."""

    def __init__(self, message: str, size: Optional[int] = None, cap: Optional[int] = None):
        super().__init__(message, "ORACLE_SIZE_EXCEEDED")
        self.size = size
        self.cap = cap
