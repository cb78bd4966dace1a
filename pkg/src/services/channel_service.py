"""
Channel Service for RZF-SKETCH

Synthetic single-cell massive-MIMO channels: user placement, path loss,
log-normal shadowing and Rayleigh fading.
"""

import logging
from typing import Optional

import numpy as np

from ..exceptions import NonFiniteError
from ..models.channel_model import ChannelConfig, ChannelMatrix
from ..utils.random_streams import make_rng


class ChannelService:
    """
    Service generating channel matrices h_k = 10^(-L(d_k)/20) sqrt(phi s_k) f_k.

    Every draw consumes the generator handed in, so a (config, seed) pair
    fully determines the output.
    """

    MAX_PLACEMENT_DRAWS = 10**6

    def __init__(self):
        """Initialize the channel service."""
        self.logger = logging.getLogger(__name__)

    def rng_for(self, cfg: ChannelConfig) -> np.random.Generator:
        """Generator seeded from ``cfg.seed``."""
        return make_rng(cfg.seed)

    def distance_guard(self, cfg: ChannelConfig) -> float:
        """Minimum user distance actually enforced for ``cfg``."""
        guard = min(cfg.min_distance, 0.5 * cfg.region_half_width)
        if guard < cfg.min_distance:
            self.logger.warning(
                "Region half width %.3g m is too small for a %.3g m guard; using %.3g m",
                cfg.region_half_width, cfg.min_distance, guard,
            )
        return guard

    def place_users(self, cfg: ChannelConfig, rng: np.random.Generator) -> np.ndarray:
        """
        Drop K users uniformly on the square [-w, w]^2.

        Users closer than the distance guard to the origin are re-drawn one
        at a time from the same stream. The guard is ``cfg.min_distance``,
        clipped to half the region half width so tiny regions still admit users.

        Args:
            cfg: Channel configuration
            rng: Seeded generator

        Returns:
            K x 2 array of positions in meters
        """
        w = cfg.region_half_width
        guard = self.distance_guard(cfg)
        positions = np.empty((cfg.K, 2), dtype=np.float64)
        draws = 0
        for k in range(cfg.K):
            while True:
                if draws >= self.MAX_PLACEMENT_DRAWS:
                    raise RuntimeError(
                        f"user placement did not terminate after {draws} draws "
                        f"(half width {w} m, guard {guard} m)"
                    )
                point = rng.uniform(-w, w, size=2)
                draws += 1
                if np.hypot(point[0], point[1]) >= guard:
                    positions[k] = point
                    break
        if draws > cfg.K:
            self.logger.debug("Re-drew %d users inside the %.3g m guard", draws - cfg.K, guard)
        return positions

    def path_loss_db(self, cfg: ChannelConfig, distances: np.ndarray) -> np.ndarray:
        """L(d) = pathloss_ref_db + slope * log10(d / 1000 m)."""
        return cfg.pathloss_ref_db + cfg.pathloss_exponent_db_per_decade * np.log10(
            distances / 1000.0
        )

    def large_scale_gains(
        self, cfg: ChannelConfig, distances: np.ndarray, rng: np.random.Generator
    ) -> np.ndarray:
        """
        Amplitude scale 10^(-L(d_k)/20) sqrt(phi s_k) of every user.

        Shadowing s_k = 10^(X_k/10) with X_k ~ N(0, shadowing_std_db^2).
        """
        shadowing_db = rng.normal(0.0, cfg.shadowing_std_db, size=distances.shape)
        shadowing = 10.0 ** (shadowing_db / 10.0)
        antenna_gain = 10.0 ** (cfg.antenna_gain_db / 10.0)
        return 10.0 ** (-self.path_loss_db(cfg, distances) / 20.0) * np.sqrt(
            antenna_gain * shadowing
        )

    def small_scale_fading(
        self, cfg: ChannelConfig, rng: np.random.Generator
    ) -> np.ndarray:
        """K x M circularly-symmetric complex Gaussian entries of unit variance."""
        real = rng.standard_normal((cfg.K, cfg.M))
        imag = rng.standard_normal((cfg.K, cfg.M))
        return (real + 1j * imag) / np.sqrt(2.0)

    def generate_channel(
        self,
        cfg: ChannelConfig,
        rng: Optional[np.random.Generator] = None,
        fading: Optional[np.ndarray] = None,
        positions: Optional[np.ndarray] = None,
    ) -> ChannelMatrix:
        """
        Generate the downlink channel for one drop.

        Args:
            cfg: Channel configuration
            rng: Seeded generator (default: stream of ``cfg.seed``)
            fading: Override of the K x M small-scale fading matrix
            positions: Override of the K x 2 user positions

        Returns:
            ChannelMatrix with rows h_k^H

        Raises:
            NonFiniteError: If the configuration produces non-finite coefficients
        """
        if rng is None:
            rng = self.rng_for(cfg)

        if positions is None:
            positions = self.place_users(cfg, rng)
        else:
            positions = np.asarray(positions, dtype=np.float64).reshape(cfg.K, 2)

        distances = np.hypot(positions[:, 0], positions[:, 1])
        scales = self.large_scale_gains(cfg, distances, rng)

        if fading is None:
            fading = self.small_scale_fading(cfg, rng)
        else:
            fading = np.broadcast_to(np.asarray(fading, dtype=np.complex128), (cfg.K, cfg.M))

        entries = scales[:, None] * fading
        if not np.all(np.isfinite(entries)):
            raise NonFiniteError(
                "channel coefficients are not finite; check path-loss and power settings",
                quantity="H",
            )
        if np.any(np.all(entries == 0.0, axis=1)):
            self.logger.warning("Generated channel has an all-zero user row")

        self.logger.debug(
            "Generated %dx%d channel, ||H||_F^2=%.6g", cfg.K, cfg.M,
            float(np.sum(np.abs(entries) ** 2)),
        )
        return ChannelMatrix(entries=entries, user_positions=positions)
