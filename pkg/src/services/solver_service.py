"""
Solver Service for RZF-SKETCH

Randomized sketching preconditioned Richardson iteration. The preconditioner
E = Q S S^T Q^T + lambda I is never formed or inverted explicitly: one
eigendecomposition of the small matrix (QS)(QS)^T gives every application
of E^-1 at O(K^2) cost per column.

The ridge parameter lambda (not gamma) enters every step of the recurrence.
"""

import logging
from typing import Optional, Union

import numpy as np
import scipy.linalg
import scipy.sparse as sp

from ..exceptions import ConfigValidationError, DimensionError
from ..models.embedding_model import RealEmbedding
from ..models.sketch_model import SketchMatrix
from ..models.solver_model import IterationRecord, Preconditioner, SolveTrace
from ..utils.helpers import ensure_finite
from .realify_service import RealifyService

SketchLike = Union[SketchMatrix, np.ndarray, sp.spmatrix]


class SolverService:
    """Service running the sketched RZF solver with a fixed sketch."""

    def __init__(self):
        """Initialize the solver service."""
        self.logger = logging.getLogger(__name__)
        self.realify = RealifyService()

    def sketch_product(self, Q: np.ndarray, S: SketchLike) -> np.ndarray:
        """
        QS for a 2K x 2M embedding and a 2M x L sketch.

        Sampling sketches are applied as a gather of scaled columns.
        """
        if isinstance(S, SketchMatrix):
            if S.n_rows != Q.shape[1]:
                raise DimensionError(
                    f"sketch has {S.n_rows} rows but Q has {Q.shape[1]} columns",
                    name="S", shape=S.shape, expected=(Q.shape[1], S.L),
                )
            return S.sketch_columns(Q)
        if S.shape[0] != Q.shape[1]:
            raise DimensionError(
                f"sketch has {S.shape[0]} rows but Q has {Q.shape[1]} columns",
                name="S", shape=S.shape, expected=(Q.shape[1], S.shape[1]),
            )
        if sp.issparse(S):
            return np.asarray((S.T @ Q.T).T)
        return Q @ np.asarray(S, dtype=np.float64)

    def factorize(self, Q: np.ndarray, S: SketchLike, lam: float) -> Preconditioner:
        """
        Eigendecomposition of (QS)(QS)^T with the lambda shift kept implicit.

        Args:
            Q: Real embedding (2K x 2M)
            S: Sketch (2M x L)
            lam: Ridge parameter

        Returns:
            Preconditioner with eigenvalues in nonincreasing order

        Raises:
            NonFiniteError: If QS is not finite
        """
        if not lam > 0:
            raise ConfigValidationError(f"lambda must be positive, got {lam}", field="lambda")
        QS = ensure_finite("QS", self.sketch_product(Q, S))
        return self.factorize_product(QS, lam)

    def factorize_product(self, QS: np.ndarray, lam: float) -> Preconditioner:
        """Preconditioner from an already formed sketch product QS."""
        gram = QS @ QS.T
        spectrum, basis = scipy.linalg.eigh(0.5 * (gram + gram.T))
        # rounding can leave tiny negative eigenvalues of a PSD matrix
        spectrum = np.clip(spectrum[::-1], 0.0, None)
        basis = np.ascontiguousarray(basis[:, ::-1])
        return Preconditioner(basis=basis, spectrum=spectrum, lam=lam)

    def apply_inverse(self, P: Preconditioner, B: np.ndarray) -> np.ndarray:
        """X = (QSS^TQ^T + lambda I)^-1 B = U ((U^T B) / (spectrum + lambda))."""
        coefficients = P.basis.T @ B
        if coefficients.ndim == 1:
            return P.basis @ (coefficients / P.shifted)
        return P.basis @ (coefficients / P.shifted[:, None])

    def apply(self, P: Preconditioner, B: np.ndarray) -> np.ndarray:
        """(QSS^TQ^T + lambda I) B through the factorization."""
        coefficients = P.basis.T @ B
        if coefficients.ndim == 1:
            return P.basis @ (coefficients * P.shifted)
        return P.basis @ (coefficients * P.shifted[:, None])

    def iterate(
        self,
        emb: RealEmbedding,
        S: SketchLike,
        t: int,
        exact: Optional[np.ndarray] = None,
        early_stop_tol: Optional[float] = None,
        verify_recurrence: bool = True,
        preconditioner: Optional[Preconditioner] = None,
        keep_iterates: bool = True,
    ) -> SolveTrace:
        """
        Run t steps of the sketched Richardson iteration.

        Starting from Lambda^(0) = Lambda, M~^(0) = 0, Y^(0) = 0, step j computes
            (i)   Lambda^(j) = Lambda^(j-1) - lambda Y^(j-1) - Q M~^(j-1)
            (ii)  Y^(j)      = (Q S S^T Q^T + lambda I)^-1 Lambda^(j)
            (iii) M~^(j)     = Q^T Y^(j)
        and accumulates M^(j) = M~^(1) + ... + M~^(j). All K columns are
        advanced together.

        Args:
            emb: Real embedding (Q, Lambda, lambda)
            S: Sketch, fixed for all iterations
            t: Number of iterations
            exact: Optional reference solution M* for error tracking
            early_stop_tol: Stop once ||Lambda^(j)||_F falls below this value
            verify_recurrence: Record the distance between the incremental
                residual and Lambda - Q M^(j-1) - lambda Y^(j-1), relative to
                max(||Lambda||_F, ||Lambda^(j)||_F)
            preconditioner: Reuse an existing factorization of this sketch
            keep_iterates: Store every partial sum and residual in the trace

        Returns:
            SolveTrace with one record per executed iteration
        """
        if t < 1:
            raise ConfigValidationError(f"iteration count must be at least 1, got {t}",
                                        field="t")
        Q, Lambda, lam = emb.Q, emb.Lambda, emb.lam
        if preconditioner is None:
            preconditioner = self.factorize(Q, S, lam)
        elif preconditioner.dimension != Q.shape[0]:
            raise DimensionError(
                "preconditioner does not match the embedding",
                name="preconditioner",
                shape=preconditioner.basis.shape,
                expected=(Q.shape[0], Q.shape[0]),
            )
        if exact is not None and exact.shape != (Q.shape[1], Lambda.shape[1]):
            raise DimensionError(
                "reference solution does not match the embedding",
                name="exact", shape=exact.shape, expected=(Q.shape[1], Lambda.shape[1]),
            )

        lambda_norm = float(np.linalg.norm(Lambda))
        exact_norm = float(np.linalg.norm(exact)) if exact is not None else None

        residual = Lambda.copy()
        Y_prev = np.zeros_like(Lambda)
        update_prev = np.zeros((Q.shape[1], Lambda.shape[1]))
        Y_sum = np.zeros_like(Lambda)
        partial = np.zeros_like(update_prev)

        trace = SolveTrace(requested_iterations=t)
        for j in range(1, t + 1):
            residual = residual - lam * Y_prev - Q @ update_prev
            residual_norm = float(np.linalg.norm(residual))

            gap = None
            if verify_recurrence:
                closed_form = Lambda - Q @ partial - lam * Y_sum
                scale = max(lambda_norm, residual_norm, 1e-300)
                gap = float(np.linalg.norm(residual - closed_form)) / scale

            if early_stop_tol is not None and residual_norm < early_stop_tol:
                trace.early_stopped = True
                self.logger.debug("Residual %.3e below tolerance at iteration %d",
                                  residual_norm, j)
                break

            Y = self.apply_inverse(preconditioner, residual)
            update = Q.T @ Y
            partial = partial + update
            Y_sum = Y_sum + Y

            error = relative = None
            if exact is not None:
                error = float(np.linalg.norm(partial - exact))
                relative = error / exact_norm if exact_norm else error

            trace.records.append(
                IterationRecord(
                    iteration=j,
                    residual_norm=residual_norm,
                    update_norm=float(np.linalg.norm(update)),
                    recurrence_gap=gap,
                    error=error,
                    relative_error=relative,
                )
            )
            if keep_iterates or j == t:
                trace.partial_sums.append(partial)
                trace.residuals.append(residual)
            Y_prev, update_prev = Y, update

        if not trace.records:
            # residual already below tolerance: the zero iterate is returned
            trace.partial_sums.append(partial)
            trace.residuals.append(residual)
        elif not keep_iterates and trace.early_stopped:
            trace.partial_sums.append(partial)
            trace.residuals.append(residual)

        trace.solution = self.realify.lift(trace.final)
        return trace

    def solve(self, emb: RealEmbedding, S: SketchLike, t: int) -> np.ndarray:
        """Complex M x K beamformer after t sketched iterations."""
        return self.iterate(emb, S, t, verify_recurrence=False, keep_iterates=False).solution
