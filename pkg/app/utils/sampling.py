"""
Muestreo de tripletas BPR (u, i, j)
"""
from dataclasses import dataclass

import numpy as np
import structlog

logger = structlog.get_logger(__name__)

MAX_NEGATIVE_TRIES = 100


@dataclass(frozen=True)
class BprBatch:
    users: np.ndarray
    positives: np.ndarray
    negatives: np.ndarray

    def __len__(self) -> int:
        return int(self.users.shape[0])

    def triples(self):
        return list(zip(self.users.tolist(), self.positives.tolist(), self.negatives.tolist()))


def _is_positive(keys: np.ndarray, users: np.ndarray, items: np.ndarray, num_items: int) -> np.ndarray:
    probe = users * num_items + items
    pos = np.searchsorted(keys, probe)
    pos = np.minimum(pos, len(keys) - 1)
    return keys[pos] == probe


def sample_bpr_batch(
    train_edges: np.ndarray,
    num_items: int,
    size: int,
    rng: np.random.Generator,
    max_tries: int = MAX_NEGATIVE_TRIES,
) -> BprBatch:
    """Positivos uniformes con reemplazo; negativos uniformes rechazados mientras sean positivos"""
    train_edges = np.asarray(train_edges, dtype=np.int64)
    if len(train_edges) == 0:
        raise ValueError("el conjunto de entrenamiento está vacío")

    keys = np.sort(train_edges[:, 0] * num_items + train_edges[:, 1])
    picked = train_edges[rng.integers(0, len(train_edges), size=size)]
    users, positives = picked[:, 0], picked[:, 1]

    negatives = rng.integers(0, num_items, size=size)
    rejected = _is_positive(keys, users, negatives, num_items)
    tries = 1
    while rejected.any() and tries < max_tries:
        negatives[rejected] = rng.integers(0, num_items, size=int(rejected.sum()))
        rejected = _is_positive(keys, users, negatives, num_items)
        tries += 1

    if rejected.any():
        logger.warning("bpr_negatives_exhausted", skipped=int(rejected.sum()), tries=max_tries)
        keep = ~rejected
        users, positives, negatives = users[keep], positives[keep], negatives[keep]

    return BprBatch(users=users, positives=positives, negatives=negatives)
