"""
Solver Models for RZF-SKETCH

Implicit preconditioner factorization and iteration traces of the sketched solver.
"""

from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import numpy as np
import orjson
from pydantic import BaseModel, ConfigDict, Field, model_validator


class Preconditioner(BaseModel):
    """
    Eigendecomposition of (QS)(QS)^T with an implicit shift by lambda.

    Attributes:
        basis: 2K x 2K orthonormal eigenvectors
        spectrum: 2K eigenvalues, clipped at zero, nonincreasing
        lam: Ridge parameter lambda
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    basis: np.ndarray
    spectrum: np.ndarray
    lam: float = Field(gt=0)

    @model_validator(mode="after")
    def _check_shift(self) -> "Preconditioner":
        n = self.spectrum.size
        if self.basis.shape != (n, n):
            raise ValueError(f"basis has shape {self.basis.shape}, expected ({n}, {n})")
        if np.any(self.spectrum < 0.0) or np.any(self.shifted <= 0.0):
            raise ValueError("shifted spectrum must be strictly positive")
        return self

    @property
    def shifted(self) -> np.ndarray:
        return self.spectrum + self.lam

    @property
    def dimension(self) -> int:
        return int(self.spectrum.size)


class IterationRecord(BaseModel):
    """Scalar summary of one Richardson step."""

    iteration: int = Field(ge=1)
    residual_norm: float
    update_norm: float
    recurrence_gap: Optional[float] = None
    error: Optional[float] = None
    relative_error: Optional[float] = None


class SolveTrace(BaseModel):
    """
    Record of a sketched Richardson run.

    Attributes:
        records: Per-iteration scalars
        partial_sums: Real iterates M_hat^(j) = sum of the first j updates
        residuals: Residual right-hand sides Lambda^(j)
        solution: Complex beamformer lifted from the last partial sum
        early_stopped: Whether the residual tolerance ended the run before t steps
        requested_iterations: The iteration count t asked for
    """

    model_config = ConfigDict(arbitrary_types_allowed=True)

    records: List[IterationRecord] = Field(default_factory=list)
    partial_sums: List[np.ndarray] = Field(default_factory=list)
    residuals: List[np.ndarray] = Field(default_factory=list)
    solution: Optional[np.ndarray] = None
    early_stopped: bool = False
    requested_iterations: int = Field(default=1, ge=1)

    @property
    def iterations(self) -> int:
        return len(self.records)

    @property
    def final(self) -> np.ndarray:
        """Last real iterate."""
        return self.partial_sums[-1]

    def errors(self) -> np.ndarray:
        """Absolute errors per iteration (NaN where no oracle was supplied)."""
        return np.array(
            [np.nan if r.error is None else r.error for r in self.records], dtype=np.float64
        )

    def residual_norms(self) -> np.ndarray:
        return np.array([r.residual_norm for r in self.records], dtype=np.float64)

    def to_dict(self) -> Dict[str, Any]:
        return {
            "requested_iterations": self.requested_iterations,
            "iterations": self.iterations,
            "early_stopped": self.early_stopped,
            "records": [record.model_dump() for record in self.records],
        }

    def to_json(self) -> str:
        return orjson.dumps(self.to_dict(), option=orjson.OPT_SERIALIZE_NUMPY).decode("utf-8")

    def dump_npz(self, path: Union[str, Path]) -> None:
        """Write every iterate and residual to a compressed ``.npz`` archive."""
        arrays: Dict[str, np.ndarray] = {}
        for j, (partial, residual) in enumerate(zip(self.partial_sums, self.residuals), start=1):
            arrays[f"partial_sum_{j}"] = partial
            arrays[f"residual_{j}"] = residual
        if self.solution is not None:
            arrays["solution"] = self.solution
        np.savez_compressed(Path(path), **arrays)
