from dataclasses import dataclass, field
from typing import Dict, List, Optional

import numpy as np


@dataclass
class InteractionDataset:
    """Interacciones implícitas deduplicadas con índices densos"""
    num_users: int
    num_items: int
    edges: np.ndarray  # (m, 2) int64, columnas usuario, ítem
    user_ids: List[str]
    item_ids: List[str]

    @property
    def num_edges(self) -> int:
        return int(self.edges.shape[0])

    def user_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 0], minlength=self.num_users)

    def item_degrees(self) -> np.ndarray:
        return np.bincount(self.edges[:, 1], minlength=self.num_items)


def _items_by_user(edges: np.ndarray, num_users: int) -> List[np.ndarray]:
    if edges.shape[0] == 0:
        return [np.empty(0, dtype=np.int64) for _ in range(num_users)]
    order = np.lexsort((edges[:, 1], edges[:, 0]))
    sorted_edges = edges[order]
    bounds = np.searchsorted(sorted_edges[:, 0], np.arange(num_users + 1))
    return [sorted_edges[bounds[u]:bounds[u + 1], 1].astype(np.int64) for u in range(num_users)]


@dataclass
class SplitDataset:
    """Particiones train/val/test disjuntas sobre el mismo espacio de índices"""
    num_users: int
    num_items: int
    train: np.ndarray
    val: np.ndarray
    test: np.ndarray
    user_ids: List[str]
    item_ids: List[str]
    seed: int = 0
    ratios: tuple = (0.7, 0.1, 0.2)
    min_rating: Optional[float] = None
    source: str = ""
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def _per_user(self, name: str) -> List[np.ndarray]:
        if name not in self._cache:
            self._cache[name] = _items_by_user(getattr(self, name), self.num_users)
        return self._cache[name]

    def train_items_by_user(self) -> List[np.ndarray]:
        return self._per_user("train")

    def val_items_by_user(self) -> List[np.ndarray]:
        return self._per_user("val")

    def test_items_by_user(self) -> List[np.ndarray]:
        return self._per_user("test")

    def train_degrees(self) -> np.ndarray:
        return np.bincount(self.train[:, 0], minlength=self.num_users) if len(self.train) else np.zeros(self.num_users, dtype=np.int64)

    def split_sizes(self) -> Dict[str, int]:
        return {"train": int(len(self.train)), "val": int(len(self.val)), "test": int(len(self.test))}
