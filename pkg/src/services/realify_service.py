"""
Realify Service for RZF-SKETCH

Maps the complex RZF ridge problem to its real counterpart and back.
Real stacks are always ordered [Re; Im].
"""

import logging
from typing import Union

import numpy as np

from ..exceptions import DimensionError
from ..models.channel_model import ChannelMatrix
from ..models.embedding_model import RealEmbedding
from ..utils.helpers import ensure_finite


class RealifyService:
    """Service converting between complex beamforming quantities and real embeddings."""

    def __init__(self):
        """Initialize the realify service."""
        self.logger = logging.getLogger(__name__)

    @staticmethod
    def _entries(H: Union[ChannelMatrix, np.ndarray]) -> np.ndarray:
        if isinstance(H, ChannelMatrix):
            return H.entries
        return np.asarray(H, dtype=np.complex128)

    def embed_channel(self, H: Union[ChannelMatrix, np.ndarray]) -> np.ndarray:
        """Q = [[Re H, -Im H], [Im H, Re H]]."""
        entries = ensure_finite("H", self._entries(H))
        if entries.ndim != 2:
            raise DimensionError("H must be a matrix", name="H", shape=entries.shape)
        real, imag = entries.real, entries.imag
        return np.block([[real, -imag], [imag, real]])

    def embed(
        self, H: Union[ChannelMatrix, np.ndarray], lam: float, beta: float = 1.0
    ) -> RealEmbedding:
        """
        Build the real embedding (Q, Lambda) of the RZF problem.

        Args:
            H: K x M channel
            lam: Ridge parameter lambda = sigma^2 / gamma
            beta: Normalization parameter

        Returns:
            RealEmbedding with Lambda = [lam * beta * I_K; 0]
        """
        Q = self.embed_channel(H)
        K = Q.shape[0] // 2
        Lambda = np.zeros((2 * K, K))
        Lambda[:K, :] = lam * beta * np.eye(K)
        return RealEmbedding(Q=Q, Lambda=Lambda, lam=lam, beta=beta)

    def stack(self, W: np.ndarray) -> np.ndarray:
        """Real stack [Re W; Im W] of a complex M x K matrix."""
        W = np.asarray(W, dtype=np.complex128)
        return np.vstack([W.real, W.imag])

    def lift(self, Mreal: np.ndarray) -> np.ndarray:
        """
        Complex matrix top + i * bottom of a real 2M x K stack.

        Raises:
            DimensionError: If the row count is odd
        """
        Mreal = np.asarray(Mreal, dtype=np.float64)
        if Mreal.ndim == 1:
            Mreal = Mreal[:, None]
        rows = Mreal.shape[0]
        if rows % 2:
            raise DimensionError(
                f"real stack has an odd number of rows ({rows})",
                name="Mreal",
                shape=Mreal.shape,
            )
        half = rows // 2
        return Mreal[:half] + 1j * Mreal[half:]

    def phi_real(self, Q: np.ndarray, Mreal: np.ndarray, k: int, j: int) -> float:
        """
        |h_k^H w_j|^2 evaluated in real arithmetic.

        Rows k and K + k of Q M hold the real and imaginary parts of (H W)_kj.
        """
        K = Q.shape[0] // 2
        row_re = Q[k, :] @ Mreal[:, j]
        row_im = Q[K + k, :] @ Mreal[:, j]
        return float(row_re * row_re + row_im * row_im)
