"""
Schemas Pydantic para validación y serialización
"""
from .dataset import DatasetManifest, SyntheticConfig
from .reports import AblationRow, GroupMetrics, GroupReport, MetricsReport, RunManifest, UniformityReport
from .training import ArraySpec, CheckpointManifest, EpochLog, Hyperparams, TrainingSummary

__all__ = [
    "DatasetManifest",
    "SyntheticConfig",
    "AblationRow",
    "GroupMetrics",
    "GroupReport",
    "MetricsReport",
    "RunManifest",
    "UniformityReport",
    "ArraySpec",
    "CheckpointManifest",
    "EpochLog",
    "Hyperparams",
    "TrainingSummary"
]
