"""
Report Models for RZF-SKETCH

Rate and bound summaries serialized into flat records for the CSV writer.
"""

import math
from typing import Any, Dict, List

import numpy as np
from pydantic import BaseModel, ConfigDict, Field, model_validator


class RateReport(BaseModel):
    """
    Per-user SINR and achievable rates of a beamformer.

    Rates are in nats; ``sum_rate_bits`` is the same quantity divided by ln 2.
    """

    model_config = ConfigDict(frozen=True)

    sinr: List[float]
    rates: List[float]
    sum_rate: float = Field(ge=0)
    sum_rate_bits: float = Field(ge=0)

    @model_validator(mode="after")
    def _check_consistency(self) -> "RateReport":
        if any(value < 0.0 for value in self.sinr):
            raise ValueError("SINR values must be nonnegative")
        expected = float(np.sum(np.log1p(self.sinr)))
        if abs(expected - self.sum_rate) > 1e-12 * max(1.0, abs(expected)):
            raise ValueError("sum_rate does not match the per-user SINRs")
        return self

    @property
    def per_user_rate(self) -> float:
        return self.sum_rate / len(self.rates) if self.rates else 0.0

    def to_record(self, prefix: str = "") -> Dict[str, Any]:
        return {
            f"{prefix}sum_rate": self.sum_rate,
            f"{prefix}sum_rate_bits": self.sum_rate_bits,
            f"{prefix}per_user_rate": self.per_user_rate,
            f"{prefix}min_sinr": min(self.sinr) if self.sinr else 0.0,
        }


class BoundReport(BaseModel):
    """
    Error and sum-rate bounds evaluated along an iteration sweep.

    Index ``t`` of each list holds the bound after t iterations (t = 0 first).

    Attributes:
        epsilon_effective: Measured sketch accuracy fed to the solution-error bound
        epsilon_ridge: Measured ridge sketch accuracy fed to the ridge-side bound
        thm1_rhs: eps^t ||W*||_F
        thm2_rhs: Ridge-side bound with the tail projection term
        corollary_rhs: Sum-rate bound with eta from the tail projection
        corollary_literal_rhs: Sum-rate bound with the literal (empty complement) eta
        C: Sum-rate sensitivity constant
        xi: Spectral cut index
        eta: Tail term ||U_perp^T Lambda||_F / sqrt(2 lambda)
        eta_literal: The same term over the empty complement, always 0
    """

    model_config = ConfigDict(frozen=True)

    epsilon_effective: float = Field(ge=0)
    epsilon_ridge: float = Field(ge=0)
    thm1_rhs: List[float]
    thm2_rhs: List[float]
    corollary_rhs: List[float]
    corollary_literal_rhs: List[float]
    C: float = Field(gt=0)
    xi: int = Field(ge=0)
    eta: float = Field(ge=0)
    eta_literal: float = Field(ge=0)

    @model_validator(mode="after")
    def _check_nonnegative(self) -> "BoundReport":
        for name in ("thm1_rhs", "thm2_rhs", "corollary_rhs", "corollary_literal_rhs"):
            values = getattr(self, name)
            if any((value < 0.0) or math.isnan(value) for value in values):
                raise ValueError(f"{name} must be nonnegative")
        return self

    def to_records(self) -> List[Dict[str, Any]]:
        """One flat record per iteration count."""
        return [
            {
                "t": t,
                "epsilon_effective": self.epsilon_effective,
                "epsilon_ridge": self.epsilon_ridge,
                "thm1_bound": self.thm1_rhs[t],
                "thm2_bound": self.thm2_rhs[t],
                "corollary_bound": self.corollary_rhs[t],
                "corollary_literal_bound": self.corollary_literal_rhs[t],
                "C": self.C,
                "xi": self.xi,
                "eta": self.eta,
                "eta_literal": self.eta_literal,
            }
            for t in range(len(self.thm1_rhs))
        ]
