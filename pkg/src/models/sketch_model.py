"""
Sketch Models for RZF-SKETCH

Sampling distributions, sampling-and-rescaling matrices and the thin SVD
of the real channel embedding.
"""

from enum import Enum
from typing import Any, Dict, Optional, Union

import numpy as np
import orjson
import scipy.sparse as sp
from pydantic import BaseModel, ConfigDict, Field, field_validator, model_validator

PROBABILITY_TOLERANCE = 1e-10
RANK_THRESHOLD = 1e-12


class SamplingScheme(str, Enum):
    """Column sampling distributions for the sketch."""

    UNIFORM = "uniform"
    LEVERAGE = "leverage"
    RIDGE_LEVERAGE = "ridge_leverage"


class LeverageNormalization(str, Enum):
    """Denominator of the leverage-score rescaling."""

    RANK = "rank"
    AMBIENT = "ambient"


class SamplingProbabilities(BaseModel):
    """
    Probability vector over the 2M columns of Q.

    Attributes:
        p: Drawing probabilities, nonnegative and summing to one
        scheme: Scheme the vector was computed with
        rescale: Probabilities used in the (L p_i)^(-1/2) rescaling when they
            differ from ``p``; ``None`` means the drawing probabilities
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    p: np.ndarray
    scheme: SamplingScheme
    rescale: Optional[np.ndarray] = None

    @field_validator("p", "rescale", mode="before")
    @classmethod
    def _as_vector(cls, value: Optional[np.ndarray]) -> Optional[np.ndarray]:
        if value is None:
            return None
        value = np.asarray(value, dtype=np.float64)
        if value.ndim != 1 or value.size == 0:
            raise ValueError("probabilities must be a nonempty vector")
        return value

    @model_validator(mode="after")
    def _check_distribution(self) -> "SamplingProbabilities":
        if not np.all(np.isfinite(self.p)) or np.any(self.p < 0.0):
            raise ValueError("probabilities must be finite and nonnegative")
        if abs(float(self.p.sum()) - 1.0) > PROBABILITY_TOLERANCE:
            raise ValueError(f"probabilities sum to {self.p.sum():.17g}, not 1")
        if self.rescale is not None:
            if self.rescale.shape != self.p.shape:
                raise ValueError("rescale probabilities must match p in length")
            if np.any(self.rescale[self.p > 0] <= 0.0):
                raise ValueError("rescale probabilities must be positive on the support")
        return self

    @property
    def n(self) -> int:
        return int(self.p.size)

    @property
    def support(self) -> np.ndarray:
        """Indices with strictly positive probability."""
        return np.flatnonzero(self.p > 0.0)

    @property
    def rescale_probs(self) -> np.ndarray:
        return self.p if self.rescale is None else self.rescale


class SketchMatrix(BaseModel):
    """
    Sampling-and-rescaling matrix S (2M x L) with one nonzero per column.

    Column j holds ``values[j]`` at row ``indices[j]``.
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    n_rows: int = Field(ge=1)
    indices: np.ndarray
    values: np.ndarray

    @field_validator("indices", mode="before")
    @classmethod
    def _as_indices(cls, value: np.ndarray) -> np.ndarray:
        return np.asarray(value, dtype=np.int64).reshape(-1)

    @field_validator("values", mode="before")
    @classmethod
    def _as_values(cls, value: np.ndarray) -> np.ndarray:
        return np.asarray(value, dtype=np.float64).reshape(-1)

    @model_validator(mode="after")
    def _check_columns(self) -> "SketchMatrix":
        if self.indices.size == 0:
            raise ValueError("a sketch needs at least one column")
        if self.indices.shape != self.values.shape:
            raise ValueError("indices and values must have one entry per column")
        if np.any(self.indices < 0) or np.any(self.indices >= self.n_rows):
            raise ValueError(f"row indices must lie in [0, {self.n_rows})")
        if not np.all(np.isfinite(self.values)) or np.any(self.values <= 0.0):
            raise ValueError("sketch values must be finite and positive")
        return self

    @property
    def L(self) -> int:
        return int(self.indices.size)

    @property
    def shape(self) -> tuple:
        return (self.n_rows, self.L)

    def to_sparse(self) -> sp.csc_matrix:
        columns = np.arange(self.L)
        return sp.csc_matrix((self.values, (self.indices, columns)), shape=self.shape)

    def to_dense(self) -> np.ndarray:
        dense = np.zeros(self.shape)
        dense[self.indices, np.arange(self.L)] = self.values
        return dense

    def sketch_columns(self, A: np.ndarray) -> np.ndarray:
        """Return A @ S for A with ``n_rows`` columns, as a gather of scaled columns."""
        return A[:, self.indices] * self.values

    def to_dict(self) -> Dict[str, Any]:
        return {
            "rows": self.n_rows,
            "L": self.L,
            "columns": [[int(i), float(v)] for i, v in zip(self.indices, self.values)],
        }

    def to_json(self) -> str:
        return orjson.dumps(self.to_dict()).decode("utf-8")

    @classmethod
    def from_json(cls, document: Union[str, bytes]) -> "SketchMatrix":
        data = orjson.loads(document)
        columns = np.asarray(data["columns"], dtype=np.float64).reshape(-1, 2)
        sketch = cls(n_rows=data["rows"], indices=columns[:, 0], values=columns[:, 1])
        if sketch.L != data["L"]:
            raise ValueError(f"document declares L={data['L']} but lists {sketch.L} columns")
        return sketch


class SpectralProfile(BaseModel):
    """
    Thin SVD Q = U diag(s) V^T of the real embedding.

    Attributes:
        singular_values: 2K values, nonincreasing
        right_vectors: 2M x 2K matrix V with orthonormal columns
        left_vectors: 2K x 2K orthogonal matrix U
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    singular_values: np.ndarray
    right_vectors: np.ndarray
    left_vectors: np.ndarray

    @model_validator(mode="after")
    def _check_factors(self) -> "SpectralProfile":
        s = self.singular_values
        if np.any(s < 0.0) or np.any(np.diff(s) > 0.0):
            raise ValueError("singular values must be nonnegative and nonincreasing")
        r = s.size
        if self.left_vectors.shape != (r, r) or self.right_vectors.shape[1] != r:
            raise ValueError("factor shapes do not match the number of singular values")
        return self

    @property
    def rank(self) -> int:
        """Numerical rank; singular values at or below 1e-12 * s_1 count as zero."""
        s = self.singular_values
        if s.size == 0 or s[0] == 0.0:
            return 0
        return int(np.count_nonzero(s > RANK_THRESHOLD * s[0]))
