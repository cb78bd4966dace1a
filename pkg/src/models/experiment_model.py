"""
Experiment Model for RZF-SKETCH

Scenario configuration for the experiment harness.
"""

from enum import Enum
from pathlib import Path
from typing import Any, Dict, List, Optional, Union

import orjson
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..exceptions import ConfigFileError, ConfigValidationError
from .channel_model import ChannelConfig
from .sketch_model import LeverageNormalization, SamplingScheme


class Scenario(str, Enum):
    """Experiments the harness can run."""

    SAMPLING_COMPARE = "sampling_compare"
    SNR_SWEEP = "snr_sweep"
    CONVERGENCE = "convergence"
    SUMRATE_CONVERGENCE = "sumrate_convergence"
    BENCH = "bench"


class RidgeLambdaSource(str, Enum):
    """Where the ridge parameter of ridge-leverage sampling comes from."""

    REGRESSION = "regression"
    RANK = "rank"


class ExperimentConfig(BaseModel):
    """
    Full description of one harness run.

    Attributes:
        scenario: Experiment to run
        channel: Channel generation parameters
        sketch_sizes: Sketch sizes L swept by the scenario
        schemes: Sampling schemes compared
        iterations: Richardson iteration count t
        snr_grid_db: SNR points (P / sigma^2, dB) of the SNR sweep
        trials: Replications per sweep point
        master_seed: Seed every trial stream is spawned from
        output_path: Trial-level CSV destination
        leverage_normalization: ``rank`` (2K) or ``ambient`` (2M) leverage rescaling
        ridge_lambda_source: Ridge parameter of ridge-leverage sampling
        ridge_rank: Target rank l when ``ridge_lambda_source`` is ``rank``
        epsilon: Target accuracy for sample-size formulas
        delta: Failure probability for sample-size formulas
        identity_when_full: Use S = I whenever L equals 2M
        early_stop_tol: Residual tolerance that ends the iteration early
        primal_cap: Largest 2M the brute-force primal oracle accepts
        bench_antennas: Antenna counts swept by the benchmark
        bench_repeats: Timed repetitions per benchmark point
        bench_warmup: Untimed repetitions before timing starts
        workers: Threads running trials concurrently
    """

    model_config = ConfigDict(extra="forbid", use_enum_values=False)

    scenario: Scenario = Scenario.SAMPLING_COMPARE
    channel: ChannelConfig = Field(default_factory=ChannelConfig)
    sketch_sizes: List[int] = Field(default_factory=lambda: [64, 128, 256, 512])
    schemes: List[SamplingScheme] = Field(default_factory=lambda: list(SamplingScheme))
    iterations: int = Field(default=10, ge=1)
    snr_grid_db: List[float] = Field(default_factory=lambda: [-10.0, -5.0, 0.0, 5.0, 10.0, 15.0, 20.0])
    trials: int = Field(default=50, ge=1)
    master_seed: int = Field(default=0, ge=0, lt=2**64)
    output_path: Optional[str] = None
    leverage_normalization: LeverageNormalization = LeverageNormalization.RANK
    ridge_lambda_source: RidgeLambdaSource = RidgeLambdaSource.REGRESSION
    ridge_rank: Optional[int] = Field(default=None, ge=1)
    epsilon: float = Field(default=0.5, gt=0, le=1)
    delta: float = Field(default=0.1, gt=0, lt=1)
    identity_when_full: bool = False
    early_stop_tol: Optional[float] = Field(default=None, gt=0)
    primal_cap: int = Field(default=2048, ge=2)
    bench_antennas: List[int] = Field(default_factory=lambda: [512, 1024, 2048])
    bench_repeats: int = Field(default=20, ge=1)
    bench_warmup: int = Field(default=1, ge=0)
    workers: int = Field(default=1, ge=1)

    @field_validator("sketch_sizes", "bench_antennas")
    @classmethod
    def _positive_sizes(cls, value: List[int]) -> List[int]:
        if any(size < 1 for size in value):
            raise ValueError("sizes must be positive")
        return value

    @model_validator(mode="after")
    def _check_scenario(self) -> "ExperimentConfig":
        scenario = self.scenario
        if not self.sketch_sizes:
            raise ValueError("sketch_sizes must not be empty")
        if scenario is Scenario.BENCH:
            antennas = self.bench_antennas or [self.channel.M]
            if min(antennas) < self.channel.K:
                raise ValueError("every benchmark antenna count must be at least K")
            limit = 2 * min(antennas)
        else:
            limit = 2 * self.channel.M
        too_large = [size for size in self.sketch_sizes if size > limit]
        if too_large:
            raise ValueError(f"sketch sizes {too_large} exceed 2M = {limit}")
        if scenario in (Scenario.SAMPLING_COMPARE, Scenario.SNR_SWEEP, Scenario.CONVERGENCE,
                        Scenario.SUMRATE_CONVERGENCE) and not self.schemes:
            raise ValueError("schemes must not be empty")
        if scenario is Scenario.SNR_SWEEP and not self.snr_grid_db:
            raise ValueError("snr_grid_db must not be empty")
        if scenario in (Scenario.CONVERGENCE, Scenario.SUMRATE_CONVERGENCE) and self.iterations < 2:
            raise ValueError("convergence scenarios need at least 2 iterations")
        if self.ridge_lambda_source is RidgeLambdaSource.RANK:
            if self.ridge_rank is None:
                raise ValueError("ridge_rank is required when ridge_lambda_source is 'rank'")
            if self.ridge_rank >= 2 * self.channel.K:
                raise ValueError("ridge_rank must be smaller than 2K")
        return self

    @property
    def antenna_sweep(self) -> List[int]:
        return list(self.bench_antennas) or [self.channel.M]

    @classmethod
    def desk_preset(cls, scenario: Union[Scenario, str] = Scenario.SAMPLING_COMPARE,
                    **overrides: Any) -> "ExperimentConfig":
        """
        CI-speed configuration: M=256, K=16, unit noise, 10 dB SNR.

        Large-scale fading is replaced by a fixed 30 dB loss so every entry of
        H is complex Gaussian with variance 1e-3, which puts the ridge
        parameter (1.6) above every squared singular value of the embedding.
        """
        channel = ChannelConfig(
            M=256,
            K=16,
            pathloss_ref_db=30.0,
            pathloss_exponent_db_per_decade=0.0,
            shadowing_std_db=0.0,
            antenna_gain_db=0.0,
            noise_power=1.0,
            transmit_power=10.0,
        )
        channel_overrides = overrides.pop("channel", None)
        if channel_overrides:
            channel = ChannelConfig.from_dict({**channel.model_dump(), **channel_overrides})
        return cls.from_dict(
            {"scenario": Scenario(scenario), "channel": channel.model_dump(), **overrides}
        )

    def to_dict(self) -> Dict[str, Any]:
        return self.model_dump(mode="json")

    def to_json(self) -> str:
        return orjson.dumps(self.to_dict(), option=orjson.OPT_INDENT_2).decode("utf-8")

    @classmethod
    def from_dict(cls, data: Dict[str, Any]) -> "ExperimentConfig":
        """
        Validate a configuration mapping.

        Raises:
            ConfigValidationError: If any field violates its constraints
        """
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(part) for part in first["loc"]) or None
            raise ConfigValidationError(
                f"Invalid experiment configuration: {first['msg']}", field=field
            ) from e

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ExperimentConfig":
        """
        Read a JSON configuration file.

        Raises:
            ConfigFileError: If the file cannot be read or is not JSON
            ConfigValidationError: If any field violates its constraints
        """
        try:
            data = orjson.loads(Path(path).read_bytes())
        except OSError as e:
            raise ConfigFileError(f"Cannot read {path}: {e}", file_path=str(path)) from e
        except orjson.JSONDecodeError as e:
            raise ConfigFileError(f"{path} is not valid JSON: {e}", file_path=str(path)) from e
        if not isinstance(data, dict):
            raise ConfigFileError(f"{path} must hold a JSON object", file_path=str(path))
        return cls.from_dict(data)
