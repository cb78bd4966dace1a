"""
Unit tests for SolverService.
"""

import numpy as np
import orjson
import pytest

from src.exceptions import ConfigValidationError, DimensionError
from src.models.embedding_model import RealEmbedding
from src.models.solver_model import Preconditioner
from src.services.realify_service import RealifyService
from src.services.rzf_service import RZFService
from src.services.sketch_service import SketchService
from src.services.solver_service import SolverService
from src.utils.helpers import relative_error
from src.utils.random_streams import make_rng
from tests.helpers import random_channel


@pytest.mark.unit
class TestSolverService:
    """Test cases for SolverService."""

    def setup_method(self):
        """Set up test fixtures."""
        self.service = SolverService()
        self.sketches = SketchService()
        self.realify = RealifyService()
        self.rzf = RZFService()

    def _instance(self, seed=0, K=4, M=16, lam=1.0):
        H = random_channel(np.random.default_rng(seed), K, M)
        emb = self.realify.embed(H, lam)
        return emb, self.rzf.solve_exact_real(emb)

    # preconditioner

    def test_factorize_identity_orthonormal(self):
        """Test spectrum 1 and halving for S = I and orthonormal rows of Q."""
        Q = np.eye(4, 6)
        P = self.service.factorize(Q, self.sketches.identity_sketch(6), 1.0)
        B = np.random.default_rng(1).standard_normal((4, 2))

        np.testing.assert_allclose(P.spectrum, np.ones(4), atol=1e-14)
        np.testing.assert_allclose(self.service.apply_inverse(P, B), B / 2.0, atol=1e-14)

    def test_factorize_short_sketch(self):
        """Test that L < 2K leaves zero eigenvalues and a usable inverse."""
        emb, _ = self._instance()
        S = self.sketches.draw_sketch(self.sketches.uniform_probs(32), 3, make_rng(2))
        P = self.service.factorize(emb.Q, S, emb.lam)

        assert np.count_nonzero(P.spectrum <= 1e-10 * P.spectrum[0]) >= 8 - 3
        assert np.all(np.isfinite(self.service.apply_inverse(P, emb.Lambda)))

    def test_spectrum_nonincreasing(self):
        """Test that eigenvalues come out in nonincreasing order."""
        emb, _ = self._instance(seed=3)
        S = self.sketches.draw_sketch(self.sketches.uniform_probs(32), 12, make_rng(3))
        P = self.service.factorize(emb.Q, S, emb.lam)

        assert np.all(np.diff(P.spectrum) <= 0)

    def test_apply_round_trip(self):
        """Test Theta (Theta^-1 b) = b against the dense Theta."""
        emb, _ = self._instance(seed=4)
        S = self.sketches.draw_sketch(self.sketches.uniform_probs(32), 20, make_rng(4))
        P = self.service.factorize(emb.Q, S, emb.lam)
        QS = S.sketch_columns(emb.Q)
        theta = QS @ QS.T + emb.lam * np.eye(8)
        b = np.random.default_rng(5).standard_normal((8, 4))

        x = self.service.apply_inverse(P, b)

        assert relative_error(theta @ x, b) < 1e-9
        assert relative_error(self.service.apply(P, x), b) < 1e-9

    def test_apply_inverse_zero(self):
        """Test that B = 0 maps to 0."""
        emb, _ = self._instance()
        P = self.service.factorize(emb.Q, self.sketches.identity_sketch(32), emb.lam)

        np.testing.assert_array_equal(self.service.apply_inverse(P, np.zeros((8, 4))),
                                      np.zeros((8, 4)))

    def test_apply_inverse_scalar_spectrum(self):
        """Test B / (s + lambda) for a flat spectrum."""
        P = Preconditioner(basis=np.eye(3), spectrum=np.full(3, 2.0), lam=0.5)
        B = np.arange(6.0).reshape(3, 2)

        np.testing.assert_allclose(self.service.apply_inverse(P, B), B / 2.5)

    def test_apply_inverse_dense_oracle(self):
        """Test against a dense solve for 2K=8 and L=6."""
        emb, _ = self._instance(seed=6)
        S = self.sketches.draw_sketch(self.sketches.uniform_probs(32), 6, make_rng(6))
        P = self.service.factorize(emb.Q, S, emb.lam)
        QS = S.sketch_columns(emb.Q)
        B = np.random.default_rng(7).standard_normal((8, 4))

        expected = np.linalg.solve(QS @ QS.T + emb.lam * np.eye(8), B)

        np.testing.assert_allclose(self.service.apply_inverse(P, B), expected, rtol=1e-9,
                                   atol=1e-12)

    def test_sketch_product_forms_agree(self):
        """Test QS for SketchMatrix, dense and sparse sketches."""
        emb, _ = self._instance()
        S = self.sketches.draw_sketch(self.sketches.uniform_probs(32), 9, make_rng(8))

        expected = emb.Q @ S.to_dense()
        np.testing.assert_allclose(self.service.sketch_product(emb.Q, S), expected)
        np.testing.assert_allclose(self.service.sketch_product(emb.Q, S.to_sparse()), expected)

    def test_sketch_product_dimension_mismatch(self):
        """Test that a sketch with the wrong row count is rejected."""
        emb, _ = self._instance()

        with pytest.raises(DimensionError):
            self.service.sketch_product(emb.Q, self.sketches.identity_sketch(10))

    def test_factorize_rejects_non_positive_lambda(self):
        """Test that lambda <= 0 is rejected."""
        with pytest.raises(ConfigValidationError):
            self.service.factorize(np.eye(2), np.eye(2), 0.0)

    # iteration

    def test_identity_sketch_one_step(self):
        """Test that S = I reaches the exact solution after one iteration."""
        emb, exact = self._instance(seed=9)
        trace = self.service.iterate(emb, self.sketches.identity_sketch(32), 1, exact=exact)

        assert trace.iterations == 1
        assert trace.records[0].relative_error <= 1e-10

    def test_zero_rhs(self):
        """Test that Lambda = 0 keeps every iterate at zero."""
        emb, _ = self._instance()
        zero = RealEmbedding(Q=emb.Q, Lambda=np.zeros_like(emb.Lambda), lam=emb.lam)
        S = self.sketches.draw_sketch(self.sketches.uniform_probs(32), 10, make_rng(0))

        trace = self.service.iterate(zero, S, 5)

        for partial in trace.partial_sums:
            np.testing.assert_array_equal(partial, np.zeros((32, 4)))

    def test_single_user_monotone_when_accurate(self):
        """Test nonincreasing error on K=1, M=2 whenever 2 * quality < 1."""
        emb = self.realify.embed(np.array([[1.0, 0.0]]), lam=1.0)
        exact = self.rzf.solve_exact_real(emb)
        profile = self.sketches.spectral_profile(emb.Q)
        probs = self.sketches.leverage_probs(profile)

        qualifying = 0
        for seed in range(50):
            S = self.sketches.draw_sketch(probs, 8, make_rng(seed))
            if 2.0 * self.sketches.sketch_quality(profile, S) >= 1.0:
                continue
            qualifying += 1
            errors = self.service.iterate(emb, S, 20, exact=exact).errors()
            assert np.all(errors[1:] <= errors[:-1] + 1e-12)

        assert qualifying >= 10

    def test_recurrence_matches_closed_form(self):
        """Test that the incremental residual equals Lambda - Q M - lambda Y."""
        emb, exact = self._instance(seed=10)
        profile = self.sketches.spectral_profile(emb.Q)
        probs = self.sketches.leverage_probs(profile)
        seed = next(
            s for s in range(100)
            if 2.0 * self.sketches.sketch_quality(
                profile, self.sketches.draw_sketch(probs, 256, make_rng(10, s))
            ) < 1.0
        )
        S = self.sketches.draw_sketch(probs, 256, make_rng(10, seed))

        trace = self.service.iterate(emb, S, 15, exact=exact)

        assert all(record.recurrence_gap <= 1e-9 for record in trace.records)
        assert trace.records[-1].relative_error < trace.records[0].relative_error

    def test_recurrence_gap_scales_with_residual(self):
        """Test that a diverging run keeps the gap relative to the residual size."""
        emb, _ = self._instance(seed=10)
        S = self.sketches.draw_sketch(self.sketches.uniform_probs(32), 16, make_rng(10))

        trace = self.service.iterate(emb, S, 15)

        assert all(record.recurrence_gap <= 1e-6 for record in trace.records)

    def test_desk_error_decreases(self, desk_embedding, desk_exact):
        """Test geometric decay on the desk preset with a leverage sketch."""
        profile = self.sketches.spectral_profile(desk_embedding.Q)
        S = self.sketches.draw_sketch(self.sketches.leverage_probs(profile), 256, make_rng(11))

        errors = self.service.iterate(desk_embedding, S, 5, exact=desk_exact).errors()

        assert np.all(np.diff(errors) < 0)
        assert errors[-1] < 0.1 * errors[0]

    def test_larger_sketch_converges_faster(self, desk_embedding, desk_exact):
        """Test that L = 512 beats L = 32 after three iterations, summed over seeds."""
        probs = self.sketches.uniform_probs(512)
        small_total = large_total = 0.0
        for seed in range(5):
            small = self.sketches.draw_sketch(probs, 32, make_rng(seed, 0))
            large = self.sketches.draw_sketch(probs, 512, make_rng(seed, 1))
            small_trace = self.service.iterate(desk_embedding, small, 3, exact=desk_exact)
            large_trace = self.service.iterate(desk_embedding, large, 3, exact=desk_exact)
            small_total += small_trace.errors()[-1]
            large_total += large_trace.errors()[-1]

        assert large_total < small_total

    def test_early_stop(self):
        """Test that a loose tolerance stops before the first update."""
        emb, _ = self._instance()
        trace = self.service.iterate(
            emb, self.sketches.identity_sketch(32), 5, early_stop_tol=1e6
        )

        assert trace.early_stopped
        assert trace.iterations == 0
        np.testing.assert_array_equal(trace.solution, np.zeros((16, 4)))

    def test_early_stop_after_convergence(self):
        """Test that the exact preconditioner stops at the second step."""
        emb, exact = self._instance(seed=13)
        trace = self.service.iterate(
            emb, self.sketches.identity_sketch(32), 10, exact=exact, early_stop_tol=1e-8,
            keep_iterates=False,
        )

        assert trace.early_stopped
        assert trace.iterations == 1
        assert relative_error(trace.final, exact) < 1e-10

    def test_keep_iterates(self):
        """Test that partial sums are stored only when requested."""
        emb, _ = self._instance()
        S = self.sketches.identity_sketch(32)

        assert len(self.service.iterate(emb, S, 4).partial_sums) == 4
        assert len(self.service.iterate(emb, S, 4, keep_iterates=False).partial_sums) == 1

    def test_reuse_preconditioner(self):
        """Test that a supplied factorization gives the same iterates."""
        emb, _ = self._instance(seed=14)
        S = self.sketches.draw_sketch(self.sketches.uniform_probs(32), 12, make_rng(14))
        P = self.service.factorize(emb.Q, S, emb.lam)

        fresh = self.service.iterate(emb, S, 3).final
        reused = self.service.iterate(emb, S, 3, preconditioner=P).final

        np.testing.assert_array_equal(fresh, reused)

    def test_preconditioner_mismatch(self):
        """Test that a factorization of another size is rejected."""
        emb, _ = self._instance()
        P = Preconditioner(basis=np.eye(2), spectrum=np.ones(2), lam=1.0)

        with pytest.raises(DimensionError):
            self.service.iterate(emb, self.sketches.identity_sketch(32), 2, preconditioner=P)

    def test_exact_shape_mismatch(self):
        """Test that a reference of the wrong shape is rejected."""
        emb, _ = self._instance()

        with pytest.raises(DimensionError):
            self.service.iterate(emb, self.sketches.identity_sketch(32), 2, exact=np.zeros((3, 3)))

    def test_iterations_must_be_positive(self):
        """Test that t < 1 is rejected."""
        emb, _ = self._instance()

        with pytest.raises(ConfigValidationError):
            self.service.iterate(emb, self.sketches.identity_sketch(32), 0)

    def test_solve_returns_complex(self):
        """Test that solve lifts the final iterate."""
        emb, exact = self._instance(seed=15)
        W = self.service.solve(emb, self.sketches.identity_sketch(32), 1)

        assert W.shape == (16, 4)
        assert np.iscomplexobj(W)
        assert relative_error(W, self.realify.lift(exact)) < 1e-10

    # trace serialization

    def test_trace_json(self):
        """Test the per-iteration JSON record."""
        emb, exact = self._instance()
        trace = self.service.iterate(emb, self.sketches.identity_sketch(32), 2, exact=exact)

        document = orjson.loads(trace.to_json())

        assert document["iterations"] == 2
        assert document["early_stopped"] is False
        assert len(document["records"]) == 2
        assert document["records"][0]["iteration"] == 1

    def test_trace_npz(self, temp_dir):
        """Test the binary dump of iterates and residuals."""
        emb, _ = self._instance()
        trace = self.service.iterate(emb, self.sketches.identity_sketch(32), 3)
        path = temp_dir / "trace.npz"

        trace.dump_npz(path)

        with np.load(path) as archive:
            assert {"partial_sum_1", "residual_3", "solution"} <= set(archive.files)
            np.testing.assert_array_equal(archive["partial_sum_3"], trace.final)
