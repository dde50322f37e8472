from collections import OrderedDict
from dataclasses import dataclass, field
from typing import Optional

import numpy as np

from app.schemas.training import Hyperparams, TrainingSummary

FINAL_EMBEDDINGS = "final_embeddings"


@dataclass
class Checkpoint:
    """Parámetros entrenados más los embeddings finales de evaluación"""
    hyperparams: Hyperparams
    num_users: int
    num_items: int
    arrays: "OrderedDict[str, np.ndarray]" = field(default_factory=OrderedDict)
    training: Optional[TrainingSummary] = None

    @property
    def final_embeddings(self) -> np.ndarray:
        return self.arrays[FINAL_EMBEDDINGS]

    @property
    def user_embeddings(self) -> np.ndarray:
        return self.final_embeddings[:self.num_users]

    @property
    def item_embeddings(self) -> np.ndarray:
        return self.final_embeddings[self.num_users:]

    def parameter_arrays(self) -> "OrderedDict[str, np.ndarray]":
        return OrderedDict((k, v) for k, v in self.arrays.items() if k != FINAL_EMBEDDINGS)
