"""
RZF Service for RZF-SKETCH

Exact regularized zero-forcing solvers in complex and real form. These are
the references every sketched result is measured against.

All linear systems are solved through a Cholesky factorization of the
Gram matrix; no inverse is ever formed.
"""

import logging
from typing import Union

import numpy as np
from scipy.linalg import cho_factor, cho_solve

from ..exceptions import ConfigValidationError, NumericalError, OracleSizeError
from ..models.channel_model import ChannelMatrix
from ..models.embedding_model import RealEmbedding
from ..utils.helpers import ensure_finite
from .realify_service import RealifyService

DEFAULT_PRIMAL_CAP = 2048


class RZFService:
    """
    Service computing W* = beta H^H (I_K + (gamma/sigma^2) H H^H)^-1 and its
    real counterparts.
    """

    def __init__(self, primal_cap: int = DEFAULT_PRIMAL_CAP):
        """
        Initialize the RZF service.

        Args:
            primal_cap: Largest 2M accepted by the brute-force primal oracle
        """
        self.logger = logging.getLogger(__name__)
        self.primal_cap = primal_cap
        self.realify = RealifyService()

    @staticmethod
    def regularizer(P: float, K: int) -> float:
        """gamma = P / K for equal per-user power."""
        if P <= 0 or K < 1:
            raise ConfigValidationError(f"need P > 0 and K >= 1, got P={P}, K={K}")
        return P / K

    @staticmethod
    def ridge_parameter(P: float, K: int, sigma2: float) -> float:
        """lambda = sigma^2 / gamma = K sigma^2 / P."""
        return sigma2 / RZFService.regularizer(P, K)

    @staticmethod
    def _check_positive(**values: float) -> None:
        for name, value in values.items():
            if not value > 0:
                raise ConfigValidationError(f"{name} must be positive, got {value}", field=name)

    def solve_exact_complex(
        self,
        H: Union[ChannelMatrix, np.ndarray],
        gamma: float,
        sigma2: float,
        beta: float = 1.0,
    ) -> np.ndarray:
        """
        K-side RZF solution beta H^H (I_K + (gamma/sigma^2) H H^H)^-1.

        Args:
            H: K x M channel
            gamma: Regularizer gamma
            sigma2: Noise power
            beta: Normalization parameter

        Returns:
            Complex M x K beamformer
        """
        self._check_positive(gamma=gamma, sigma2=sigma2, beta=beta)
        entries = ensure_finite("H", self.realify._entries(H))
        K = entries.shape[0]
        gram = np.eye(K) + (gamma / sigma2) * (entries @ entries.conj().T)
        factor = cho_factor(gram, lower=True)
        # gram is Hermitian, so H^H gram^-1 = (gram^-1 H)^H
        return beta * cho_solve(factor, entries).conj().T

    def solve_exact_complex_mside(
        self,
        H: Union[ChannelMatrix, np.ndarray],
        gamma: float,
        sigma2: float,
        beta: float = 1.0,
    ) -> np.ndarray:
        """M-side RZF solution beta (I_M + (gamma/sigma^2) H^H H)^-1 H^H."""
        self._check_positive(gamma=gamma, sigma2=sigma2, beta=beta)
        entries = ensure_finite("H", self.realify._entries(H))
        M = entries.shape[1]
        gram = np.eye(M) + (gamma / sigma2) * (entries.conj().T @ entries)
        return beta * cho_solve(cho_factor(gram, lower=True), entries.conj().T)

    def solve_exact_real(self, emb: RealEmbedding) -> np.ndarray:
        """
        Real solution M* = Q^T (Q Q^T + lambda I_2K)^-1 Lambda.

        Returns:
            Real 2M x K stack [Re W*; Im W*]
        """
        Q = emb.Q
        gram = Q @ Q.T
        gram[np.diag_indices_from(gram)] += emb.lam
        Y = cho_solve(cho_factor(gram, lower=True), emb.Lambda)
        return Q.T @ Y

    def solve_exact_primal(self, emb: RealEmbedding) -> np.ndarray:
        """
        Brute-force oracle M* = (Q^T Q + lambda I_2M)^-1 Q^T Lambda.

        Raises:
            OracleSizeError: If 2M exceeds ``primal_cap``
        """
        n = emb.Q.shape[1]
        if n > self.primal_cap:
            raise OracleSizeError(
                f"primal oracle refuses 2M={n} above the cap {self.primal_cap}",
                size=n,
                cap=self.primal_cap,
            )
        Q = emb.Q
        gram = Q.T @ Q
        gram[np.diag_indices_from(gram)] += emb.lam
        return cho_solve(cho_factor(gram, lower=True), Q.T @ emb.Lambda)

    def power_normalize(self, W: np.ndarray, P: float) -> np.ndarray:
        """
        Scale W so that ||W||_F^2 = P.

        Raises:
            ConfigValidationError: If P is not positive
            NumericalError: If W is the zero matrix
        """
        self._check_positive(P=P)
        norm = float(np.linalg.norm(W))
        if norm == 0.0:
            raise NumericalError("cannot power-normalize the zero beamformer", "ZERO_BEAMFORMER")
        return (np.sqrt(P) / norm) * W

    def rzf_beamformer(
        self, H: Union[ChannelMatrix, np.ndarray], P: float, sigma2: float
    ) -> np.ndarray:
        """End-to-end RZF: gamma = P/K, beta = 1, then power normalization."""
        entries = self.realify._entries(H)
        gamma = self.regularizer(P, entries.shape[0])
        return self.power_normalize(self.solve_exact_complex(entries, gamma, sigma2), P)
