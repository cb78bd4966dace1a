"""
Sketch Service for RZF-SKETCH

Sampling probabilities (uniform, leverage, ridge leverage), construction of
sampling-and-rescaling matrices, effective degrees of freedom, sketch
quality measurements and sample-size formulas.
"""

import logging
import math
from typing import Optional, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp
from scipy.linalg import cho_factor, cho_solve

from ..exceptions import ConfigValidationError, DimensionError, RankDeficiencyError
from ..models.sketch_model import (
    LeverageNormalization,
    SamplingProbabilities,
    SamplingScheme,
    SketchMatrix,
    SpectralProfile,
)

SketchLike = Union[SketchMatrix, np.ndarray, sp.spmatrix]


class SketchService:
    """
    Service for everything about the sketch S.

    Probability vectors live on the 2M columns of the real embedding Q.
    """

    def __init__(self):
        """Initialize the sketch service."""
        self.logger = logging.getLogger(__name__)

    # ------------------------------------------------------------------
    # Spectral quantities
    # ------------------------------------------------------------------

    def spectral_profile(self, Q: np.ndarray) -> SpectralProfile:
        """
        Thin SVD of Q (2K x 2M, 2K <= 2M).

        Returns:
            SpectralProfile with U (2K x 2K), singular values, V (2M x 2K)
        """
        U, s, Vt = scipy.linalg.svd(Q, full_matrices=False, lapack_driver="gesdd")
        return SpectralProfile(singular_values=s, right_vectors=Vt.T, left_vectors=U)

    def sigma_lambda(self, profile: SpectralProfile, lam: float) -> np.ndarray:
        """Diagonal of Sigma_lambda: sqrt(s_i^2 / (s_i^2 + lambda))."""
        self._check_lambda(lam)
        s2 = profile.singular_values**2
        return np.sqrt(s2 / (s2 + lam))

    def degrees_of_freedom(self, profile: SpectralProfile, lam: float) -> float:
        """Effective degrees of freedom d_lambda = sum s_i^2 / (s_i^2 + lambda)."""
        self._check_lambda(lam)
        s2 = profile.singular_values**2
        return float(np.sum(s2 / (s2 + lam)))

    def ridge_param_from_rank(
        self, Q: np.ndarray, ell: int, profile: Optional[SpectralProfile] = None
    ) -> float:
        """
        lambda = ||Q - Q_l||_F^2 / l, the tail energy beyond rank l over l.

        Raises:
            RankDeficiencyError: If l is not below the numerical rank of Q
        """
        profile = profile or self.spectral_profile(Q)
        rank = profile.rank
        if ell < 1 or ell >= rank:
            raise RankDeficiencyError(
                f"target rank {ell} must satisfy 1 <= l < rank(Q) = {rank}",
                rank=rank,
                required=ell + 1,
            )
        tail = profile.singular_values[ell:] ** 2
        return float(np.sum(tail) / ell)

    # ------------------------------------------------------------------
    # Sampling probabilities
    # ------------------------------------------------------------------

    def uniform_probs(self, n: int) -> SamplingProbabilities:
        """p_i = 1/n on all n columns."""
        if n < 1:
            raise ConfigValidationError(f"need at least one column, got n={n}", field="n")
        return SamplingProbabilities(p=np.full(n, 1.0 / n), scheme=SamplingScheme.UNIFORM)

    def leverage_scores(self, profile: SpectralProfile) -> np.ndarray:
        """tau_i = ||V_i||^2, the squared row norms of V."""
        V = profile.right_vectors
        return np.einsum("ij,ij->i", V, V)

    def leverage_scores_definitional(self, Q: np.ndarray) -> np.ndarray:
        """tau_i = Q_i^T (Q Q^T)^+ Q_i through the pseudoinverse."""
        pinv = np.linalg.pinv(Q @ Q.T, hermitian=True)
        return np.einsum("ij,ij->j", Q, pinv @ Q)

    def leverage_probs(
        self,
        profile: SpectralProfile,
        normalization: Union[LeverageNormalization, str] = LeverageNormalization.RANK,
    ) -> SamplingProbabilities:
        """
        Leverage-score probabilities p_i = tau_i / 2K.

        With ``normalization="ambient"`` the drawing distribution is unchanged
        but the rescaling uses tau_i / 2M.

        Raises:
            RankDeficiencyError: If rank(Q) < 2K
        """
        two_k = profile.singular_values.size
        rank = profile.rank
        if rank < two_k:
            raise RankDeficiencyError(
                f"leverage sampling needs rank(Q) = {two_k}, found {rank}",
                rank=rank,
                required=two_k,
            )
        tau = self.leverage_scores(profile)
        p = tau / two_k
        rescale = None
        if LeverageNormalization(normalization) is LeverageNormalization.AMBIENT:
            rescale = tau / tau.size
        return SamplingProbabilities(p=p, scheme=SamplingScheme.LEVERAGE, rescale=rescale)

    def ridge_leverage_scores(self, profile: SpectralProfile, lam: float) -> np.ndarray:
        """Ridge leverage scores ||(V Sigma_lambda)_i||^2."""
        weighted = profile.right_vectors * self.sigma_lambda(profile, lam)
        return np.einsum("ij,ij->i", weighted, weighted)

    def ridge_leverage_scores_definitional(self, Q: np.ndarray, lam: float) -> np.ndarray:
        """Ridge leverage scores Q_i^T (Q Q^T + lambda I)^-1 Q_i through the resolvent."""
        self._check_lambda(lam)
        gram = Q @ Q.T
        gram[np.diag_indices_from(gram)] += lam
        return np.einsum("ij,ij->j", Q, cho_solve(cho_factor(gram, lower=True), Q))

    def ridge_leverage_probs(
        self, Q: Optional[np.ndarray], profile: Optional[SpectralProfile], lam: float
    ) -> SamplingProbabilities:
        """
        Ridge-leverage probabilities p_i = ||(V Sigma_lambda)_i||^2 / d_lambda.

        Args:
            Q: Real embedding, used when no profile is supplied
            profile: Thin SVD of Q
            lam: Ridge parameter
        """
        if profile is None:
            if Q is None:
                raise ConfigValidationError("either Q or its spectral profile is required")
            profile = self.spectral_profile(Q)
        tau = self.ridge_leverage_scores(profile, lam)
        d_lam = self.degrees_of_freedom(profile, lam)
        return SamplingProbabilities(p=tau / d_lam, scheme=SamplingScheme.RIDGE_LEVERAGE)

    def sampling_probabilities(
        self,
        scheme: Union[SamplingScheme, str],
        profile: SpectralProfile,
        lam: float,
        normalization: Union[LeverageNormalization, str] = LeverageNormalization.RANK,
    ) -> SamplingProbabilities:
        """Probabilities for ``scheme`` on the columns described by ``profile``."""
        scheme = SamplingScheme(scheme)
        if scheme is SamplingScheme.UNIFORM:
            return self.uniform_probs(profile.right_vectors.shape[0])
        if scheme is SamplingScheme.LEVERAGE:
            return self.leverage_probs(profile, normalization)
        return self.ridge_leverage_probs(None, profile, lam)

    # ------------------------------------------------------------------
    # Sketch construction
    # ------------------------------------------------------------------

    def draw_sketch(
        self, probs: SamplingProbabilities, L: int, rng: np.random.Generator
    ) -> SketchMatrix:
        """
        Sample L columns i.i.d. with replacement and rescale by (L p_i)^(-1/2).

        Rows with zero probability are outside the sampler's support.
        """
        if L < 1:
            raise ConfigValidationError(f"sketch size must be positive, got L={L}", field="L")
        support = probs.support
        weights = probs.p[support]
        chosen = rng.choice(support.size, size=L, replace=True, p=weights / weights.sum())
        indices = support[chosen]
        values = 1.0 / np.sqrt(L * probs.rescale_probs[indices])
        return SketchMatrix(n_rows=probs.n, indices=indices, values=values)

    def identity_sketch(self, n: int) -> SketchMatrix:
        """S = I_n, written as n unit columns."""
        return SketchMatrix(n_rows=n, indices=np.arange(n), values=np.ones(n))

    # ------------------------------------------------------------------
    # Sketch quality
    # ------------------------------------------------------------------

    def sketch_rows(self, A: np.ndarray, S: SketchLike) -> np.ndarray:
        """
        A^T S for A with one row per column of Q, returned as (A^T S).

        Args:
            A: n x r matrix (typically V)
            S: n x L sketch

        Returns:
            r x L matrix
        """
        if isinstance(S, SketchMatrix):
            if S.n_rows != A.shape[0]:
                raise DimensionError(
                    f"sketch has {S.n_rows} rows, expected {A.shape[0]}",
                    name="S", shape=S.shape, expected=(A.shape[0], S.L),
                )
            return (A[S.indices, :] * S.values[:, None]).T
        if S.shape[0] != A.shape[0]:
            raise DimensionError(
                f"sketch has {S.shape[0]} rows, expected {A.shape[0]}",
                name="S", shape=S.shape, expected=(A.shape[0], S.shape[1]),
            )
        if sp.issparse(S):
            return np.asarray((S.T @ A).T)
        return A.T @ np.asarray(S, dtype=np.float64)

    def sketch_quality(self, profile: SpectralProfile, S: SketchLike) -> float:
        """Spectral norm ||V^T S S^T V - I_2K||_2."""
        VS = self.sketch_rows(profile.right_vectors, S)
        deviation = VS @ VS.T - np.eye(VS.shape[0])
        return self._symmetric_norm(deviation)

    def ridge_sketch_quality(
        self, profile: SpectralProfile, S: SketchLike, lam: float
    ) -> float:
        """Spectral norm ||Sigma_l V^T S S^T V Sigma_l - Sigma_l^2||_2."""
        weights = self.sigma_lambda(profile, lam)
        VS = self.sketch_rows(profile.right_vectors, S) * weights[:, None]
        deviation = VS @ VS.T - np.diag(weights**2)
        return self._symmetric_norm(deviation)

    # ------------------------------------------------------------------
    # Sample-size formulas
    # ------------------------------------------------------------------

    def min_samples_leverage(self, K: int, epsilon: float, delta: float) -> int:
        """Smallest L with L >= (16K / 3 eps^2) ln(4 (1 + 2K) / delta)."""
        self._check_accuracy(epsilon, delta)
        if K < 1:
            raise ConfigValidationError(f"K must be positive, got {K}", field="K")
        bound = (16.0 * K / (3.0 * epsilon**2)) * math.log(4.0 * (1.0 + 2.0 * K) / delta)
        return int(math.ceil(bound))

    def min_samples_ridge(self, d_lambda: float, epsilon: float, delta: float) -> int:
        """Smallest L with L >= (8 d / 3 eps^2) ln(4 (1 + d) / delta)."""
        self._check_accuracy(epsilon, delta)
        if not d_lambda > 0:
            raise ConfigValidationError(
                f"degrees of freedom must be positive, got {d_lambda}", field="d_lambda"
            )
        bound = (8.0 * d_lambda / (3.0 * epsilon**2)) * math.log(
            4.0 * (1.0 + d_lambda) / delta
        )
        return int(math.ceil(bound))

    # ------------------------------------------------------------------

    @staticmethod
    def _symmetric_norm(matrix: np.ndarray) -> float:
        if matrix.size == 0:
            return 0.0
        eigenvalues = scipy.linalg.eigvalsh(0.5 * (matrix + matrix.T))
        return float(np.max(np.abs(eigenvalues)))

    @staticmethod
    def _check_lambda(lam: float) -> None:
        if not lam > 0:
            raise ConfigValidationError(f"lambda must be positive, got {lam}", field="lambda")

    @staticmethod
    def _check_accuracy(epsilon: float, delta: float) -> None:
        if not 0 < epsilon <= 1:
            raise ConfigValidationError(f"epsilon must lie in (0, 1], got {epsilon}",
                                        field="epsilon")
        if not 0 < delta < 1:
            raise ConfigValidationError(f"delta must lie in (0, 1), got {delta}", field="delta")
