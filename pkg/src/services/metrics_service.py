"""
Metrics Service for RZF-SKETCH

SINR, sum-rate and error norms, plus evaluators for the solution-error and
sum-rate error bounds of the sketched solver. Rates use the natural
logarithm; bits are derived only for reporting.
"""

import logging
import math
from typing import Sequence, Tuple, Union

import numpy as np

from ..exceptions import ConfigValidationError
from ..models.channel_model import ChannelMatrix
from ..models.report_model import BoundReport, RateReport
from ..models.sketch_model import SpectralProfile
from ..utils.helpers import ensure_shape

ArrayOrChannel = Union[ChannelMatrix, np.ndarray]


def _entries(H: ArrayOrChannel) -> np.ndarray:
    if isinstance(H, ChannelMatrix):
        return H.entries
    return np.asarray(H, dtype=np.complex128)


class MetricsService:
    """Service computing rates, errors and bound right-hand sides."""

    def __init__(self):
        """Initialize the metrics service."""
        self.logger = logging.getLogger(__name__)

    # ------------------------------------------------------------------
    # Rates
    # ------------------------------------------------------------------

    def phi_matrix(self, H: ArrayOrChannel, W: np.ndarray) -> np.ndarray:
        """All received powers phi_kj = |h_k^H w_j|^2 as a K x K matrix."""
        return np.abs(_entries(H) @ np.asarray(W)) ** 2

    def phi(self, H: ArrayOrChannel, W: np.ndarray, k: int, j: int) -> float:
        """phi_kj(W) = |h_k^H w_j|^2."""
        entries = _entries(H)
        return float(abs(entries[k, :] @ np.asarray(W)[:, j]) ** 2)

    def sinr_all(self, H: ArrayOrChannel, W: np.ndarray, sigma2: float) -> np.ndarray:
        """SINR_k = phi_kk / (sum_{j != k} phi_kj + sigma^2) for every user."""
        self._check_noise(sigma2)
        phi = self.phi_matrix(H, W)
        signal = np.diag(phi)
        interference = phi.sum(axis=1) - signal
        return signal / (interference + sigma2)

    def sinr(self, H: ArrayOrChannel, W: np.ndarray, sigma2: float, k: int) -> float:
        return float(self.sinr_all(H, W, sigma2)[k])

    def sum_rate(self, H: ArrayOrChannel, W: np.ndarray, sigma2: float) -> RateReport:
        """
        Achievable sum-rate R(W) = sum_k ln(1 + SINR_k).

        Returns:
            RateReport in nats, with the bit value alongside
        """
        sinr = self.sinr_all(H, W, sigma2)
        sinr_list = [float(value) for value in sinr]
        rates = np.log1p(sinr_list)
        total = float(np.sum(rates))
        return RateReport(
            sinr=sinr_list,
            rates=[float(rate) for rate in rates],
            sum_rate=total,
            sum_rate_bits=total / math.log(2.0),
        )

    def solution_error(self, What: np.ndarray, Wstar: np.ndarray) -> float:
        """Frobenius norm ||W_hat - W*||_F."""
        ensure_shape("What", np.asarray(What), np.shape(Wstar))
        return float(np.linalg.norm(What - Wstar))

    # ------------------------------------------------------------------
    # Solution-error bounds
    # ------------------------------------------------------------------

    @staticmethod
    def xi_index(singular_values: Sequence[float], lam: float) -> int:
        """Largest xi with s_xi^2 >= lambda (0 if none, 2K if all)."""
        s = np.asarray(singular_values, dtype=np.float64)
        return int(np.count_nonzero(s**2 >= lam))

    def tail_projection(
        self, profile: SpectralProfile, Lambda: np.ndarray, start: int, norm: str = "fro"
    ) -> float:
        """||U_{start,perp}^T Lambda|| with the complement spanned by columns start.. of U."""
        tail = profile.left_vectors[:, start:]
        if tail.shape[1] == 0:
            return 0.0
        projected = tail.T @ Lambda
        return float(np.linalg.norm(projected, 2 if norm == "spectral" else "fro"))

    def eta_terms(
        self, profile: SpectralProfile, Lambda: np.ndarray, lam: float
    ) -> Tuple[float, float]:
        """
        Both readings of the additive term eta.

        Returns:
            (tail reading ||U_{xi,perp}^T Lambda||_F / sqrt(2 lambda),
             literal reading over the complement of all 2K vectors, which is 0)
        """
        self._check_positive("lambda", lam)
        xi = self.xi_index(profile.singular_values, lam)
        scale = 1.0 / math.sqrt(2.0 * lam)
        tail = scale * self.tail_projection(profile, Lambda, xi, norm="fro")
        literal = scale * self.tail_projection(
            profile, Lambda, profile.singular_values.size, norm="spectral"
        )
        return tail, literal

    @staticmethod
    def thm1_bound(epsilon: float, t: int, Wstar: Union[np.ndarray, float]) -> float:
        """eps^t ||W*||_F."""
        norm = Wstar if np.isscalar(Wstar) else float(np.linalg.norm(Wstar))
        return float(epsilon**t * norm)

    def thm2_bound(
        self,
        epsilon: float,
        t: int,
        Wstar: np.ndarray,
        lam: float,
        Lambda: np.ndarray,
        profile: SpectralProfile,
    ) -> float:
        """(eps^t / sqrt 2) (||W*||_F^2 + ||U_{xi,perp}^T Lambda||_F^2 / (2 lambda))^(1/2)."""
        self._check_positive("lambda", lam)
        xi = self.xi_index(profile.singular_values, lam)
        tail = self.tail_projection(profile, Lambda, xi)
        inner = float(np.linalg.norm(Wstar)) ** 2 + tail**2 / (2.0 * lam)
        return float(epsilon**t / math.sqrt(2.0) * math.sqrt(inner))

    def thm2_column_bound(
        self,
        epsilon: float,
        t: int,
        wstar: np.ndarray,
        lam: float,
        lambda_column: np.ndarray,
        profile: SpectralProfile,
    ) -> float:
        """Ridge-side bound for one column; the matrix bound is their root sum of squares."""
        self._check_positive("lambda", lam)
        xi = self.xi_index(profile.singular_values, lam)
        tail = self.tail_projection(profile, np.reshape(lambda_column, (-1, 1)), xi)
        inner = float(np.linalg.norm(wstar)) ** 2 + tail**2 / (2.0 * lam)
        return float(epsilon**t / math.sqrt(2.0) * math.sqrt(inner))

    # ------------------------------------------------------------------
    # Sum-rate bounds
    # ------------------------------------------------------------------

    def constant_C(self, H: ArrayOrChannel, Wstar: np.ndarray, sigma2: float) -> float:
        """
        C = 2 max_k { 1 / (I_k + sigma^2), phi_kk / (I_k + sigma^2)^2 }.

        I_k is the interference sum_{j != k} phi_kj(W*).
        """
        self._check_noise(sigma2)
        phi = self.phi_matrix(H, Wstar)
        signal = np.diag(phi)
        denominator = phi.sum(axis=1) - signal + sigma2
        candidates = np.concatenate([1.0 / denominator, signal / denominator**2])
        return float(2.0 * np.max(candidates))

    def thm_approx_R_bound(
        self, H: ArrayOrChannel, What: np.ndarray, Wstar: np.ndarray, C: float
    ) -> float:
        """C ||H||_F^2 (||W_hat - W*||_F^2 + 2 ||W_hat - W*||_F ||W*||_F)."""
        d = self.solution_error(What, Wstar)
        h2 = float(np.linalg.norm(_entries(H)) ** 2)
        return float(C * h2 * (d * d + 2.0 * d * float(np.linalg.norm(Wstar))))

    def general_rate_bound(
        self, beta_t: float, C: float, H: ArrayOrChannel, Wstar: np.ndarray, eta: float = 0.0
    ) -> float:
        """3 C |beta_t| ||H||_F^2 (||W*||_F + eta)^2 for a sequence with error <= beta_t scale."""
        h2 = float(np.linalg.norm(_entries(H)) ** 2)
        return float(3.0 * C * abs(beta_t) * h2 * (float(np.linalg.norm(Wstar)) + eta) ** 2)

    def corollary_bound(
        self,
        t: int,
        epsilon: float,
        C: float,
        H: ArrayOrChannel,
        Wstar: np.ndarray,
        eta: float = 0.0,
    ) -> float:
        """3 C eps^t ||H||_F^2 (||W*||_F + eta)^2."""
        if eta < 0:
            raise ConfigValidationError(f"eta must be nonnegative, got {eta}", field="eta")
        return self.general_rate_bound(epsilon**t, C, H, Wstar, eta)

    def bound_report(
        self,
        H: ArrayOrChannel,
        Wstar: np.ndarray,
        sigma2: float,
        lam: float,
        Lambda: np.ndarray,
        profile: SpectralProfile,
        quality: float,
        ridge_quality: float,
        t_max: int,
    ) -> BoundReport:
        """
        Evaluate every bound for t = 0..t_max from measured sketch qualities.

        The solution-error side uses eps = 2 * quality, the ridge side
        eps = 4 sqrt(2) * ridge_quality.
        """
        epsilon = 2.0 * quality
        epsilon_ridge = 4.0 * math.sqrt(2.0) * ridge_quality
        C = self.constant_C(H, Wstar, sigma2)
        eta, eta_literal = self.eta_terms(profile, Lambda, lam)
        steps = range(t_max + 1)
        return BoundReport(
            epsilon_effective=epsilon,
            epsilon_ridge=epsilon_ridge,
            thm1_rhs=[self.thm1_bound(epsilon, t, Wstar) for t in steps],
            thm2_rhs=[self.thm2_bound(epsilon_ridge, t, Wstar, lam, Lambda, profile)
                      for t in steps],
            corollary_rhs=[self.corollary_bound(t, epsilon, C, H, Wstar, eta) for t in steps],
            corollary_literal_rhs=[self.corollary_bound(t, epsilon, C, H, Wstar, eta_literal)
                                   for t in steps],
            C=C,
            xi=self.xi_index(profile.singular_values, lam),
            eta=eta,
            eta_literal=eta_literal,
        )

    # ------------------------------------------------------------------
    # Inequalities used by the verification suite
    # ------------------------------------------------------------------

    @staticmethod
    def log_gap_holds(a: np.ndarray, b: np.ndarray) -> np.ndarray:
        """Elementwise |ln(1+a) - ln(1+b)| <= |a - b|."""
        return np.abs(np.log1p(a) - np.log1p(b)) <= np.abs(np.asarray(a) - np.asarray(b))

    @staticmethod
    def ratio_perturbation_bound(
        x: np.ndarray, y: np.ndarray, a: np.ndarray, b: np.ndarray
    ) -> np.ndarray:
        """Right side |y - a| / b + a |x| / b^2 bounding |y/(x+b) - a/b|."""
        return np.abs(y - a) / np.abs(b) + a * np.abs(x) / b**2

    @staticmethod
    def phi_perturbation_bound(h: np.ndarray, w_hat: np.ndarray, w: np.ndarray) -> float:
        """||w_hat - w|| ||h||^2 (||w_hat - w|| + 2 ||w||) bounding |phi(w_hat) - phi(w)|."""
        d = float(np.linalg.norm(w_hat - w))
        return d * float(np.linalg.norm(h)) ** 2 * (d + 2.0 * float(np.linalg.norm(w)))

    # ------------------------------------------------------------------

    @staticmethod
    def _check_noise(sigma2: float) -> None:
        if not sigma2 > 0:
            raise ConfigValidationError(f"noise power must be positive, got {sigma2}",
                                        field="sigma2")

    @staticmethod
    def _check_positive(name: str, value: float) -> None:
        if not value > 0:
            raise ConfigValidationError(f"{name} must be positive, got {value}", field=name)
