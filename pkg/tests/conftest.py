"""
Pytest configuration and fixtures for RZF-SKETCH

This module provides shared fixtures and configuration for all tests.
"""

import logging
import sys
import tempfile
from pathlib import Path
from typing import Generator

import numpy as np
import pytest

# Add src to Python path first
src_dir = Path(__file__).parent.parent / "src"
sys.path.insert(0, str(src_dir))

from src.models.channel_model import ChannelMatrix
from src.models.experiment_model import ExperimentConfig
from src.services.channel_service import ChannelService
from src.services.realify_service import RealifyService
from src.services.rzf_service import RZFService
from src.utils.logging_config import RUN_LOGGER_NAME
from src.utils.random_streams import make_rng

DESK_LAMBDA = 1.6


@pytest.fixture
def temp_dir() -> Generator[Path, None, None]:
    """
    Provide a temporary directory for test files.

    The directory is automatically cleaned up after the test.
    """
    with tempfile.TemporaryDirectory() as temp_path:
        yield Path(temp_path)


@pytest.fixture
def restore_logging():
    """Undo handler changes made by setup_logging during a test."""
    root = logging.getLogger()
    run_logger = logging.getLogger(RUN_LOGGER_NAME)
    saved = (list(root.handlers), root.level, list(run_logger.handlers), run_logger.propagate)
    yield
    for logger in (root, run_logger):
        for handler in list(logger.handlers):
            logger.removeHandler(handler)
            handler.close()
    root.handlers[:] = saved[0]
    root.setLevel(saved[1])
    run_logger.handlers[:] = saved[2]
    run_logger.propagate = saved[3]


@pytest.fixture
def desk_config() -> ExperimentConfig:
    """Desk preset: M=256, K=16, sigma^2=1, P=10 (lambda = 1.6)."""
    return ExperimentConfig.desk_preset()


@pytest.fixture
def desk_channel(desk_config) -> ChannelMatrix:
    """One desk-preset channel drawn from a fixed stream."""
    return ChannelService().generate_channel(desk_config.channel, make_rng(2024))


@pytest.fixture
def desk_embedding(desk_channel):
    """Real embedding of the desk channel at lambda = 1.6, beta = 1."""
    return RealifyService().embed(desk_channel, DESK_LAMBDA)


@pytest.fixture
def desk_exact(desk_embedding) -> np.ndarray:
    """Exact real solution of the desk embedding."""
    return RZFService().solve_exact_real(desk_embedding)


@pytest.fixture
def small_channel() -> np.ndarray:
    """Complex 4 x 16 Gaussian channel."""
    rng = np.random.default_rng(7)
    return (rng.standard_normal((4, 16)) + 1j * rng.standard_normal((4, 16))) / np.sqrt(2.0)

