"""
Unit tests for ChannelService.
"""

import logging

import numpy as np
import pytest
from scipy import stats

from src.exceptions import ConfigFileError, ConfigValidationError, NonFiniteError
from src.models.channel_model import ChannelConfig, ChannelMatrix
from src.services.channel_service import ChannelService
from src.utils.random_streams import make_rng
from tests.helpers import desk_channel_config


@pytest.mark.unit
class TestChannelService:
    """Test cases for ChannelService."""

    def setup_method(self):
        """Set up test fixtures."""
        self.service = ChannelService()

    def test_positions_inside_square(self):
        """Test that every user lies in [-w, w]^2 and outside the guard."""
        cfg = ChannelConfig(M=64, K=16, seed=3)
        positions = self.service.place_users(cfg, make_rng(cfg.seed))

        assert positions.shape == (16, 2)
        assert np.all(np.abs(positions) <= 5000.0)
        assert np.all(np.hypot(positions[:, 0], positions[:, 1]) >= 1.0)

    def test_positions_deterministic(self):
        """Test that the same seed gives the same positions."""
        cfg = ChannelConfig(M=64, K=8, seed=11)
        first = self.service.place_users(cfg, make_rng(cfg.seed))
        second = self.service.place_users(cfg, make_rng(cfg.seed))

        np.testing.assert_array_equal(first, second)

    def test_tiny_region_terminates(self, caplog):
        """Test that a region smaller than the guard still places every user."""
        caplog.set_level(logging.WARNING)
        cfg = ChannelConfig(M=8, K=8, region_half_width=0.5, seed=5)

        positions = self.service.place_users(cfg, make_rng(cfg.seed))

        assert positions.shape == (8, 2)
        assert np.all(np.abs(positions) <= 0.5)
        assert np.all(np.hypot(positions[:, 0], positions[:, 1]) >= 0.25)
        assert any("too small" in record.message for record in caplog.records)

    def test_closed_form_scale(self):
        """Test the entry scale at 1 km with unit fading and no shadowing."""
        cfg = ChannelConfig(
            M=4,
            K=2,
            shadowing_std_db=0.0,
            antenna_gain_db=0.0,
            pathloss_ref_db=128.1,
            pathloss_exponent_db_per_decade=37.6,
        )
        H = self.service.generate_channel(
            cfg,
            make_rng(0),
            fading=np.ones((2, 4)),
            positions=np.array([[1000.0, 0.0], [0.0, -1000.0]]),
        )

        expected = 10.0 ** (-128.1 / 20.0)
        assert expected == pytest.approx(3.936e-7, rel=1e-3)
        np.testing.assert_allclose(H.entries, np.full((2, 4), expected + 0j), rtol=1e-12)

    def test_path_loss_slope(self):
        """Test that ten times the distance adds one slope of loss."""
        cfg = ChannelConfig()
        losses = self.service.path_loss_db(cfg, np.array([100.0, 1000.0]))

        assert losses[1] == pytest.approx(128.1)
        assert losses[1] - losses[0] == pytest.approx(37.6)

    def test_generate_deterministic(self):
        """Test bit-identical channels for the same seed."""
        cfg = ChannelConfig(M=32, K=4, seed=99)
        first = self.service.generate_channel(cfg)
        second = self.service.generate_channel(cfg)

        np.testing.assert_array_equal(first.entries, second.entries)
        np.testing.assert_array_equal(first.user_positions, second.user_positions)

    def test_different_seeds_differ(self):
        """Test that different seeds give different channels."""
        first = self.service.generate_channel(ChannelConfig(M=16, K=2, seed=1))
        second = self.service.generate_channel(ChannelConfig(M=16, K=2, seed=2))

        assert not np.array_equal(first.entries, second.entries)

    def test_unit_variance_fading(self):
        """Test that unit large-scale terms give E|H_11|^2 = 1 within 3%."""
        cfg = desk_channel_config(M=1, K=1, pathloss_ref_db=0.0)
        powers = np.array(
            [abs(self.service.generate_channel(cfg, make_rng(seed)).entries[0, 0]) ** 2
             for seed in range(20000)]
        )

        assert powers.mean() == pytest.approx(1.0, rel=0.03)

    def test_desk_preset_variance(self, desk_channel):
        """Test that the desk preset entries have variance 1e-3."""
        assert desk_channel.entries.shape == (16, 256)
        assert np.mean(np.abs(desk_channel.entries) ** 2) == pytest.approx(1e-3, rel=0.1)

    def test_desk_preset_rayleigh(self, desk_channel):
        """Test exponential |h|^2 and Gaussian real parts with a Kolmogorov-Smirnov check."""
        entries = desk_channel.entries.ravel()

        power = stats.kstest(np.abs(entries) ** 2, "expon", args=(0.0, 1e-3))
        real = stats.kstest(entries.real, "norm", args=(0.0, np.sqrt(5e-4)))

        assert power.pvalue > 1e-3
        assert real.pvalue > 1e-3

    def test_non_finite_channel_rejected(self):
        """Test that an overflowing path loss raises NonFiniteError."""
        cfg = ChannelConfig(M=2, K=1, pathloss_ref_db=-1e4)

        with pytest.raises(NonFiniteError):
            self.service.generate_channel(cfg, positions=np.array([[1000.0, 0.0]]))

    def test_zero_row_warning(self, caplog):
        """Test that an all-zero user row is reported."""
        caplog.set_level(logging.WARNING)
        cfg = ChannelConfig(M=2, K=2)
        fading = np.array([[1.0, 1.0], [0.0, 0.0]])

        self.service.generate_channel(cfg, fading=fading)

        assert any("all-zero" in record.message for record in caplog.records)


@pytest.mark.unit
class TestChannelConfig:
    """Test cases for ChannelConfig."""

    def test_defaults(self):
        """Test the documented defaults."""
        cfg = ChannelConfig()

        assert (cfg.M, cfg.K) == (256, 16)
        assert cfg.noise_power == pytest.approx(3.981e-14, rel=1e-3)
        assert cfg.transmit_power == 1.0

    def test_users_exceed_antennas(self):
        """Test that K > M is rejected."""
        with pytest.raises(ConfigValidationError):
            ChannelConfig.from_dict({"M": 4, "K": 8})

    def test_non_positive_noise(self):
        """Test that nonpositive noise power is rejected with the field name."""
        with pytest.raises(ConfigValidationError) as exc_info:
            ChannelConfig.from_dict({"noise_power": 0.0})

        assert exc_info.value.field == "noise_power"

    def test_unknown_field(self):
        """Test that unknown fields are rejected."""
        with pytest.raises(ConfigValidationError):
            ChannelConfig.from_dict({"antennas": 8})

    def test_json_file_round_trip(self, temp_dir):
        """Test save and load through a JSON file."""
        cfg = ChannelConfig(M=32, K=4, seed=17, transmit_power=2.5)
        path = temp_dir / "channel.json"

        cfg.save(path)
        loaded = ChannelConfig.load(path)

        assert loaded == cfg

    def test_load_missing_file(self, temp_dir):
        """Test that a missing file raises ConfigFileError."""
        with pytest.raises(ConfigFileError):
            ChannelConfig.load(temp_dir / "missing.json")

    def test_invalid_json(self):
        """Test that malformed JSON raises ConfigFileError."""
        with pytest.raises(ConfigFileError):
            ChannelConfig.from_json("{not json")

    def test_snr_db(self):
        """Test the transmit SNR in dB."""
        cfg = ChannelConfig(noise_power=1.0, transmit_power=10.0)

        assert cfg.snr_db == pytest.approx(10.0)


@pytest.mark.unit
class TestChannelMatrix:
    """Test cases for ChannelMatrix."""

    def test_properties(self):
        """Test K, M, norm and distances."""
        H = ChannelMatrix(
            entries=np.array([[1.0, 1j, 0.0]]), user_positions=np.array([[3.0, 4.0]])
        )

        assert (H.K, H.M) == (1, 3)
        assert H.frobenius_norm_sq == pytest.approx(2.0)
        np.testing.assert_allclose(H.distances(), [5.0])

    def test_rejects_non_finite(self):
        """Test that NaN entries are rejected."""
        with pytest.raises(ValueError):
            ChannelMatrix(entries=np.array([[np.nan, 1.0]]), user_positions=np.zeros((1, 2)))

    def test_rejects_position_shape(self):
        """Test that positions must be K x 2."""
        with pytest.raises(ValueError):
            ChannelMatrix(entries=np.ones((2, 3)), user_positions=np.zeros((3, 2)))
