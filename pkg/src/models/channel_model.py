"""
Channel Model for RZF-SKETCH

Configuration of the single-cell downlink scenario and the generated channel matrix.
"""

from pathlib import Path
from typing import Union

import numpy as np
import orjson
from pydantic import BaseModel, ConfigDict, Field, ValidationError, field_validator, model_validator

from ..exceptions import ConfigFileError, ConfigValidationError

# -174 dBm/Hz thermal noise over 10 MHz, in watts
DEFAULT_NOISE_POWER = 10 ** ((-174.0 + 70.0 - 30.0) / 10.0)


class ChannelConfig(BaseModel):
    """
    Geometry, propagation and power parameters of one cell.

    Attributes:
        M: Number of base-station antennas
        K: Number of single-antenna users
        region_half_width: Half width w of the square [-w, w]^2 users live in (m)
        pathloss_ref_db: Path loss at 1 km (dB)
        pathloss_exponent_db_per_decade: Path-loss slope (dB per decade of distance)
        shadowing_std_db: Standard deviation of log-normal shadowing (dB)
        antenna_gain_db: Antenna gain (dB)
        noise_power: Receiver noise power sigma^2 (W)
        transmit_power: Total transmit power P (W)
        seed: Seed of the channel stream
        min_distance: Users closer to the base station than this are re-drawn (m)
    """

    model_config = ConfigDict(extra="forbid", populate_by_name=True)

    M: int = Field(default=256, ge=1)
    K: int = Field(default=16, ge=1)
    region_half_width: float = Field(default=5000.0, gt=0)
    pathloss_ref_db: float = 128.1
    pathloss_exponent_db_per_decade: float = 37.6
    shadowing_std_db: float = Field(default=8.0, ge=0)
    antenna_gain_db: float = 5.0
    noise_power: float = Field(default=DEFAULT_NOISE_POWER, gt=0)
    transmit_power: float = Field(default=1.0, gt=0)
    seed: int = Field(default=0, ge=0, lt=2**64)
    min_distance: float = Field(default=1.0, gt=0)

    @field_validator(
        "region_half_width",
        "pathloss_ref_db",
        "pathloss_exponent_db_per_decade",
        "antenna_gain_db",
        "noise_power",
        "transmit_power",
    )
    @classmethod
    def _finite(cls, value: float) -> float:
        if not np.isfinite(value):
            raise ValueError("must be finite")
        return value

    @model_validator(mode="after")
    def _users_fit_antennas(self) -> "ChannelConfig":
        if self.K > self.M:
            raise ValueError(f"K={self.K} users exceed M={self.M} antennas")
        return self

    @property
    def snr_db(self) -> float:
        """Transmit SNR P/sigma^2 in dB."""
        return float(10.0 * np.log10(self.transmit_power / self.noise_power))

    def to_json(self) -> str:
        """Serialize to a JSON document with snake_case field names."""
        return orjson.dumps(self.model_dump(), option=orjson.OPT_INDENT_2).decode("utf-8")

    @classmethod
    def from_json(cls, document: Union[str, bytes]) -> "ChannelConfig":
        """
        Parse a JSON document.

        Raises:
            ConfigFileError: If the document is not valid JSON
            ConfigValidationError: If a field violates its constraints
        """
        try:
            data = orjson.loads(document)
        except orjson.JSONDecodeError as e:
            raise ConfigFileError(f"Invalid channel configuration JSON: {e}") from e
        return cls.from_dict(data)

    @classmethod
    def from_dict(cls, data: dict) -> "ChannelConfig":
        try:
            return cls.model_validate(data)
        except ValidationError as e:
            first = e.errors()[0]
            field = ".".join(str(part) for part in first["loc"]) or None
            raise ConfigValidationError(
                f"Invalid channel configuration: {first['msg']}", field=field
            ) from e

    @classmethod
    def load(cls, path: Union[str, Path]) -> "ChannelConfig":
        try:
            document = Path(path).read_bytes()
        except OSError as e:
            raise ConfigFileError(f"Cannot read {path}: {e}", file_path=str(path)) from e
        return cls.from_json(document)

    def save(self, path: Union[str, Path]) -> None:
        Path(path).write_text(self.to_json(), encoding="utf-8")


class ChannelMatrix(BaseModel):
    """
    Downlink channel H whose row k is h_k^H.

    Attributes:
        entries: Complex K x M channel coefficients
        user_positions: K x 2 user coordinates (m)
    """

    model_config = ConfigDict(arbitrary_types_allowed=True, frozen=True)

    entries: np.ndarray
    user_positions: np.ndarray

    @field_validator("entries", mode="before")
    @classmethod
    def _check_entries(cls, value: np.ndarray) -> np.ndarray:
        value = np.asarray(value, dtype=np.complex128)
        if value.ndim != 2:
            raise ValueError(f"channel must be a matrix, got {value.ndim} dimensions")
        if not np.all(np.isfinite(value)):
            raise ValueError("channel contains non-finite entries")
        return value

    @field_validator("user_positions", mode="before")
    @classmethod
    def _check_positions_dtype(cls, value: np.ndarray) -> np.ndarray:
        return np.asarray(value, dtype=np.float64)

    @model_validator(mode="after")
    def _check_positions(self) -> "ChannelMatrix":
        if self.user_positions.shape != (self.entries.shape[0], 2):
            raise ValueError(
                f"user_positions has shape {self.user_positions.shape}, "
                f"expected ({self.entries.shape[0]}, 2)"
            )
        return self

    @property
    def K(self) -> int:
        return int(self.entries.shape[0])

    @property
    def M(self) -> int:
        return int(self.entries.shape[1])

    @property
    def frobenius_norm_sq(self) -> float:
        return float(np.sum(np.abs(self.entries) ** 2))

    def distances(self) -> np.ndarray:
        """Distance of every user to the base station at the origin (m)."""
        return np.hypot(self.user_positions[:, 0], self.user_positions[:, 1])
