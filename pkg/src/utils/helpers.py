"""
Helper functions for RZF-SKETCH

Utility functions shared by services and the command-line runner.
"""

import platform
from pathlib import Path
from typing import Any, Dict, Union

import numpy as np
import psutil
import scipy

from ..exceptions import DimensionError, NonFiniteError


def ensure_finite(name: str, array: np.ndarray) -> np.ndarray:
    """
    Reject arrays holding NaN or infinite entries.

    Args:
        name: Quantity name used in the error message
        array: Array to check

    Returns:
        The array unchanged

    Raises:
        NonFiniteError: If any entry is not finite
    """
    if not np.all(np.isfinite(array)):
        raise NonFiniteError(f"{name} contains non-finite entries", quantity=name)
    return array


def ensure_shape(name: str, array: np.ndarray, expected: tuple) -> np.ndarray:
    """
    Reject arrays whose shape differs from ``expected``.

    ``None`` entries in ``expected`` match any extent.
    """
    if array.ndim != len(expected) or any(
        want is not None and have != want for have, want in zip(array.shape, expected)
    ):
        raise DimensionError(
            f"{name} has shape {array.shape}, expected {expected}",
            name=name,
            shape=array.shape,
            expected=tuple(-1 if want is None else want for want in expected),
        )
    return array


def relative_error(approx: np.ndarray, reference: np.ndarray) -> float:
    """
    Relative Frobenius distance ||approx - reference|| / ||reference||.

    Falls back to the absolute distance when the reference is zero.
    """
    diff = float(np.linalg.norm(approx - reference))
    scale = float(np.linalg.norm(reference))
    return diff / scale if scale > 0.0 else diff


def summary_path(out_path: Union[str, Path]) -> Path:
    """Path of the aggregated summary written next to a trial-level CSV."""
    out = Path(out_path)
    return out.with_name(out.stem + ".summary.csv")


def metadata_path(out_path: Union[str, Path]) -> Path:
    """Path of the JSON metadata sidecar written next to a trial-level CSV."""
    out = Path(out_path)
    return out.with_name(out.stem + ".meta.json")


def get_system_info() -> Dict[str, Any]:
    """
    Get system information.

    Returns:
        Dictionary containing system information
    """
    return {
        "platform": platform.platform(),
        "machine": platform.machine(),
        "processor": platform.processor(),
        "python_version": platform.python_version(),
        "numpy_version": np.__version__,
        "scipy_version": scipy.__version__,
        "cpu_count": psutil.cpu_count(),
        "memory_total": psutil.virtual_memory().total,
    }


def format_duration(seconds: float) -> str:
    """
    Format duration in human readable format.

    Args:
        seconds: Duration in seconds

    Returns:
        Formatted duration string
    """
    if seconds < 1:
        return f"{seconds * 1000:.1f} ms"
    if seconds < 60:
        return f"{seconds:.1f} seconds"
    if seconds < 3600:
        return f"{seconds / 60:.1f} minutes"
    return f"{seconds / 3600:.1f} hours"
