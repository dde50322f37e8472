"""
Servicios del motor
"""
from .dataset_service import DatasetService
from .evaluation_service import EvaluationService
from .experiment_service import ExperimentService
from .training_service import TrainingService

__all__ = [
    "DatasetService",
    "EvaluationService",
    "ExperimentService",
    "TrainingService"
]
