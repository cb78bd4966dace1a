"""
Models package for RZF-SKETCH

Pydantic data models shared by the services and the experiment harness.
"""

from .channel_model import ChannelConfig, ChannelMatrix
from .embedding_model import RealEmbedding
from .experiment_model import ExperimentConfig, RidgeLambdaSource, Scenario
from .report_model import BoundReport, RateReport
from .sketch_model import (
    LeverageNormalization,
    SamplingProbabilities,
    SamplingScheme,
    SketchMatrix,
    SpectralProfile,
)
from .solver_model import IterationRecord, Preconditioner, SolveTrace

__all__ = [
    "BoundReport",
    "ChannelConfig",
    "ChannelMatrix",
    "ExperimentConfig",
    "IterationRecord",
    "LeverageNormalization",
    "Preconditioner",
    "RateReport",
    "RealEmbedding",
    "RidgeLambdaSource",
    "SamplingProbabilities",
    "SamplingScheme",
    "Scenario",
    "SketchMatrix",
    "SolveTrace",
    "SpectralProfile",
]
