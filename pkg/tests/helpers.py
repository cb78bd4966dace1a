"""
Shared test helpers for RZF-SKETCH
"""

import numpy as np

from src.models.channel_model import ChannelConfig
from src.models.experiment_model import ExperimentConfig


def random_channel(rng: np.random.Generator, K: int, M: int, scale: float = 1.0) -> np.ndarray:
    """Complex K x M Gaussian matrix with entry variance scale^2."""
    entries = rng.standard_normal((K, M)) + 1j * rng.standard_normal((K, M))
    return scale * entries / np.sqrt(2.0)


def desk_channel_config(**overrides) -> ChannelConfig:
    """Channel part of the desk preset with field overrides."""
    channel = ExperimentConfig.desk_preset().channel
    return ChannelConfig.model_validate({**channel.model_dump(), **overrides})


def small_experiment(scenario, **overrides) -> ExperimentConfig:
    """Desk-style configuration with M=32, K=4 and two trials."""
    settings = {"sketch_sizes": [16, 32], "trials": 2, "iterations": 4, **overrides}
    channel = {"M": 32, "K": 4, **settings.pop("channel", {})}
    return ExperimentConfig.desk_preset(scenario, channel=channel, **settings)
