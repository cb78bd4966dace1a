"""
Services package for RZF-SKETCH

Contains the numerical services and the experiment harness.
"""

from .channel_service import ChannelService
from .experiment_service import ExperimentService
from .metrics_service import MetricsService
from .realify_service import RealifyService
from .rzf_service import RZFService
from .sketch_service import SketchService
from .solver_service import SolverService

__all__ = [
    "ChannelService",
    "ExperimentService",
    "MetricsService",
    "RealifyService",
    "RZFService",
    "SketchService",
    "SolverService",
]
