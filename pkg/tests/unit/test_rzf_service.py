"""
Unit tests for RZFService.
"""

import numpy as np
import pytest

from src.exceptions import ConfigValidationError, NumericalError, OracleSizeError
from src.models.embedding_model import RealEmbedding
from src.services.realify_service import RealifyService
from src.services.rzf_service import RZFService
from src.utils.helpers import relative_error
from tests.helpers import random_channel


@pytest.mark.unit
class TestRZFService:
    """Test cases for RZFService."""

    def setup_method(self):
        """Set up test fixtures."""
        self.service = RZFService()
        self.realify = RealifyService()

    @pytest.mark.parametrize(
        "P, K, expected", [(50.0, 50, 1.0), (1.0, 4, 0.25), (10.0, 1, 10.0)]
    )
    def test_regularizer(self, P, K, expected):
        """Test gamma = P / K."""
        assert self.service.regularizer(P, K) == pytest.approx(expected)

    def test_ridge_parameter(self):
        """Test lambda = K sigma^2 / P for the desk preset."""
        assert self.service.ridge_parameter(10.0, 16, 1.0) == pytest.approx(1.6)

    def test_regularizer_rejects_zero_power(self):
        """Test that P = 0 is rejected."""
        with pytest.raises(ConfigValidationError):
            self.service.regularizer(0.0, 4)

    def test_complex_single_user(self):
        """Test W* = [0.5, 0]^T for H = [[1, 0]]."""
        W = self.service.solve_exact_complex(np.array([[1.0, 0.0]]), 1.0, 1.0)

        np.testing.assert_allclose(W, [[0.5], [0.0]], atol=1e-15)

    def test_complex_identity_channel(self):
        """Test W* = I / 2 for H = I."""
        W = self.service.solve_exact_complex(np.eye(5), 1.0, 1.0)

        np.testing.assert_allclose(W, 0.5 * np.eye(5), atol=1e-15)

    def test_complex_forms_agree(self):
        """Test that the K-side and M-side forms agree."""
        H = random_channel(np.random.default_rng(0), 8, 32)

        k_side = self.service.solve_exact_complex(H, 0.7, 1.3, beta=2.0)
        m_side = self.service.solve_exact_complex_mside(H, 0.7, 1.3, beta=2.0)

        assert relative_error(m_side, k_side) < 1e-8

    def test_real_single_user(self):
        """Test M* = [0.5, 0, 0, 0]^T for the K=1, M=2 embedding."""
        emb = self.realify.embed(np.array([[1.0, 0.0]]), lam=1.0)

        np.testing.assert_allclose(self.service.solve_exact_real(emb), [[0.5], [0], [0], [0]],
                                   atol=1e-15)

    def test_real_matches_complex(self):
        """Test that the lifted real solution equals the complex one."""
        rng = np.random.default_rng(1)
        for _ in range(5):
            H = random_channel(rng, 8, 64)
            gamma, sigma2 = 0.4, 1.0
            emb = self.realify.embed(H, sigma2 / gamma)

            lifted = self.realify.lift(self.service.solve_exact_real(emb))
            complex_solution = self.service.solve_exact_complex(H, gamma, sigma2)

            assert relative_error(lifted, complex_solution) < 1e-9

    def test_real_zero_rhs(self):
        """Test that Lambda = 0 gives M* = 0."""
        Q = self.realify.embed_channel(random_channel(np.random.default_rng(2), 3, 6))
        emb = RealEmbedding(Q=Q, Lambda=np.zeros((6, 3)), lam=1.0)

        np.testing.assert_array_equal(self.service.solve_exact_real(emb), np.zeros((12, 3)))

    def test_primal_single_user(self):
        """Test the primal oracle on the K=1, M=2 instance."""
        emb = self.realify.embed(np.array([[1.0, 0.0]]), lam=1.0)

        np.testing.assert_allclose(self.service.solve_exact_primal(emb), [[0.5], [0], [0], [0]],
                                   atol=1e-15)

    def test_primal_matches_dual(self):
        """Test that the primal and dual real forms agree."""
        emb = self.realify.embed(random_channel(np.random.default_rng(3), 4, 16), lam=0.8)

        primal = self.service.solve_exact_primal(emb)
        dual = self.service.solve_exact_real(emb)

        assert relative_error(primal, dual) < 1e-8

    def test_primal_large_lambda(self):
        """Test ||M*|| <= ||Q^T Lambda|| / lambda for lambda = 1e6 and ||Q||_2 = 1."""
        H = random_channel(np.random.default_rng(4), 3, 9)
        H = H / np.linalg.norm(H, 2)
        emb = self.realify.embed(H, lam=1e6)

        solution = self.service.solve_exact_primal(emb)
        limit = np.linalg.norm(emb.Q.T @ emb.Lambda) / 1e6 * (1 + 1e-6)

        assert np.linalg.norm(solution) <= limit

    def test_real_linear_in_beta(self):
        """Test that solving with beta = c gives c times the beta = 1 solution."""
        H = random_channel(np.random.default_rng(8), 4, 16)
        base = self.service.solve_exact_real(self.realify.embed(H, 0.8))

        doubled = self.service.solve_exact_real(self.realify.embed(H, 0.8, beta=2.0))
        scaled = self.service.solve_exact_real(self.realify.embed(H, 0.8, beta=3.7))

        np.testing.assert_array_equal(doubled, 2.0 * base)
        np.testing.assert_allclose(scaled, 3.7 * base, rtol=1e-13, atol=1e-15)

    def test_complex_linear_in_beta(self):
        """Test beta linearity of both complex forms."""
        H = random_channel(np.random.default_rng(9), 3, 10)

        for solve in (self.service.solve_exact_complex, self.service.solve_exact_complex_mside):
            base = solve(H, 0.5, 1.0)
            np.testing.assert_allclose(solve(H, 0.5, 1.0, beta=2.5), 2.5 * base,
                                       rtol=1e-13, atol=1e-15)

    def test_ridge_shrinkage(self):
        """Test that ||Q^T (QQ^T + lambda I)^-1 Lambda||_F is nonincreasing in lambda."""
        H = random_channel(np.random.default_rng(10), 4, 16)
        Q = self.realify.embed_channel(H)
        Lambda = self.realify.embed(H, 1.0).Lambda

        norms = [
            np.linalg.norm(self.service.solve_exact_real(RealEmbedding(Q=Q, Lambda=Lambda, lam=lam)))
            for lam in np.logspace(-3, 3, 25)
        ]

        assert np.all(np.diff(norms) <= 1e-12 * np.max(norms))
        assert norms[-1] < norms[0]

    def test_primal_cap(self):
        """Test that the primal oracle refuses embeddings above the cap."""
        service = RZFService(primal_cap=4)
        emb = self.realify.embed(random_channel(np.random.default_rng(5), 2, 4), lam=1.0)

        with pytest.raises(OracleSizeError) as exc_info:
            service.solve_exact_primal(emb)

        assert exc_info.value.size == 8
        assert exc_info.value.cap == 4

    def test_power_normalize(self):
        """Test scaling to the power budget."""
        np.testing.assert_allclose(
            self.service.power_normalize(np.array([[0.5], [0.0]]), 1.0), [[1.0], [0.0]]
        )

    def test_power_normalize_idempotent(self):
        """Test that an already normalized beamformer is unchanged."""
        W = random_channel(np.random.default_rng(6), 6, 2)
        once = self.service.power_normalize(W, 3.0)

        np.testing.assert_allclose(self.service.power_normalize(once, 3.0), once, atol=1e-12)

    def test_power_normalize_norm(self):
        """Test ||W||_F^2 = P after normalization."""
        W = np.eye(2) / np.sqrt(2.0)
        normalized = self.service.power_normalize(W, 4.0)

        assert np.linalg.norm(normalized) ** 2 == pytest.approx(4.0)

    def test_power_normalize_zero(self):
        """Test that the zero beamformer cannot be normalized."""
        with pytest.raises(NumericalError) as exc_info:
            self.service.power_normalize(np.zeros((3, 2)), 1.0)

        assert exc_info.value.error_code == "ZERO_BEAMFORMER"

    def test_power_normalize_non_positive_power(self):
        """Test that P <= 0 is rejected."""
        with pytest.raises(ConfigValidationError):
            self.service.power_normalize(np.eye(2), -1.0)

    def test_rzf_beamformer(self):
        """Test the end-to-end beamformer power and direction."""
        H = random_channel(np.random.default_rng(7), 4, 12)

        W = self.service.rzf_beamformer(H, 2.0, 0.5)
        direction = self.service.solve_exact_complex(H, 0.5, 0.5)

        assert np.linalg.norm(W) ** 2 == pytest.approx(2.0)
        assert relative_error(W, direction * np.linalg.norm(W) / np.linalg.norm(direction)) < 1e-12
