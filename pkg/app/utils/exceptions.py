"""
Excepciones del motor de entrenamiento
"""
from typing import Optional


class LagclError(Exception):
    """Error base del motor"""


class DatasetError(LagclError):

    def __init__(self, message: str, line: Optional[int] = None):
        self.line = line
        if line is not None:
            message = f"línea {line}: {message}"
        super().__init__(message)


class ShapeError(LagclError):
    """Dimensiones incompatibles entre tablas"""


class ConfigError(LagclError):

    def __init__(self, key: str, message: str):
        self.key = key
        super().__init__(f"{key}: {message}")


class CheckpointError(LagclError):
    """Checkpoint corrupto, truncado o incompatible"""


class TrainingDivergedError(LagclError):
    """Pérdida total no finita durante el entrenamiento"""


class EvaluationError(LagclError):
    """No hay usuarios evaluables o parámetros inválidos"""
