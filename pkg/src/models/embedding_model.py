"""
Real Embedding Model for RZF-SKETCH

Real-valued counterpart of the complex RZF ridge problem.
"""

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator


class RealEmbedding(BaseModel):
    """
    Real ridge problem min ||Q^T M - ...|| equivalent to the complex RZF solve.

    Attributes:
        Q: 2K x 2M block matrix [[Re H, -Im H], [Im H, Re H]]
        Lambda: 2K x K right-hand side; top block lam * beta * I_K, bottom block zero
        lam: Ridge parameter lambda = sigma^2 / gamma
        beta: Normalization parameter the right-hand side is scaled by
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    Q: np.ndarray
    Lambda: np.ndarray
    lam: float = Field(gt=0)
    beta: float = Field(default=1.0, gt=0)

    @field_validator("Q", "Lambda", mode="before")
    @classmethod
    def _as_real_matrix(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=np.float64)
        if value.ndim != 2:
            raise ValueError(f"expected a matrix, got {value.ndim} dimensions")
        return value

    @model_validator(mode="after")
    def _check_blocks(self) -> "RealEmbedding":
        rows, cols = self.Q.shape
        if rows % 2 or cols % 2:
            raise ValueError(f"Q has odd shape {self.Q.shape}")
        K = rows // 2
        if self.Lambda.shape != (rows, K):
            raise ValueError(f"Lambda has shape {self.Lambda.shape}, expected ({rows}, {K})")
        if np.any(self.Lambda[K:, :] != 0.0):
            raise ValueError("bottom block of Lambda must be exactly zero")
        return self

    @property
    def K(self) -> int:
        return self.Q.shape[0] // 2

    @property
    def M(self) -> int:
        return self.Q.shape[1] // 2
