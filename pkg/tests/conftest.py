import numpy as np
import pytest
import torch

from app.models.dataset_model import SplitDataset
from app.schemas.training import Hyperparams
from app.utils.graph import build_graph

TOY_USERS = 12
TOY_ITEMS = 10


def toy_edges() -> np.ndarray:
    """12 usuarios con grados 2..7 sobre 10 ítems"""
    edges = []
    for u in range(TOY_USERS):
        degree = 2 + (u * 7) % 6
        edges.extend((u, (3 * u + j) % TOY_ITEMS) for j in range(degree))
    return np.array(edges, dtype=np.int64)


def make_toy_split() -> SplitDataset:
    train, val, test = [], [], []
    edges = toy_edges()
    for u in range(TOY_USERS):
        mine = edges[edges[:, 0] == u]
        if len(mine) >= 5:
            train.extend(mine[:-2]), val.append(mine[-2]), test.append(mine[-1])
        elif len(mine) >= 4:
            train.extend(mine[:-1]), test.append(mine[-1])
        else:
            train.extend(mine)
    as_array = lambda rows: np.array(rows, dtype=np.int64).reshape(-1, 2)
    return SplitDataset(
        num_users=TOY_USERS,
        num_items=TOY_ITEMS,
        train=as_array(train),
        val=as_array(val),
        test=as_array(test),
        user_ids=[f"u{u}" for u in range(TOY_USERS)],
        item_ids=[f"i{i}" for i in range(TOY_ITEMS)],
    )


def random_graph(rng: np.random.Generator, max_side: int = 15, density: float = 0.3):
    num_users = int(rng.integers(1, max_side + 1))
    num_items = int(rng.integers(1, max_side + 1))
    mask = rng.random((num_users, num_items)) < density
    if not mask.any():
        mask[0, 0] = True
    edges = np.argwhere(mask).astype(np.int64)
    return build_graph(edges, num_users, num_items), edges


def dense_normalized(edges: np.ndarray, num_users: int, num_items: int) -> np.ndarray:
    """D^{-1/2} A D^{-1/2} construido directamente desde la lista de aristas"""
    n = num_users + num_items
    A = np.zeros((n, n))
    for u, i in edges:
        A[u, num_users + i] = 1.0
        A[num_users + i, u] = 1.0
    deg = A.sum(axis=1)
    inv = np.where(deg > 0, 1.0 / np.sqrt(np.where(deg > 0, deg, 1.0)), 0.0)
    return inv[:, None] * A * inv[None, :]


@pytest.fixture
def toy_split() -> SplitDataset:
    return make_toy_split()


@pytest.fixture
def toy_graph(toy_split):
    return build_graph(toy_split.train, toy_split.num_users, toy_split.num_items)


@pytest.fixture
def toy_hp() -> Hyperparams:
    return Hyperparams(
        embedding_dim=4,
        layers=2,
        degree_threshold=3,
        batch_size=8,
        epochs=2,
        patience=5,
        eval_k=5,
        eval_batch_users=4,
        seed=11,
        cl_denominator="all",
    )


@pytest.fixture
def rng() -> np.random.Generator:
    return np.random.default_rng(1234)


@pytest.fixture(autouse=True)
def _float_precision():
    previous = torch.get_default_dtype()
    yield
    torch.set_default_dtype(previous)
