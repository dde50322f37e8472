"""
Grafo bipartito usuario-ítem, propagación normalizada y partición cabeza/cola
"""
from dataclasses import dataclass
from functools import cached_property
from typing import List, Sequence, Tuple

import numpy as np
import scipy.sparse as sp
import structlog
import torch

from app.utils.exceptions import DatasetError, ShapeError

logger = structlog.get_logger(__name__)

LayerStack = List[torch.Tensor]


@dataclass(frozen=True, eq=False)
class BipartiteGraph:
    """Adyacencia simétrica en CSR; los ítems ocupan [num_users, n)"""
    num_users: int
    num_items: int
    indptr: np.ndarray
    indices: np.ndarray
    degree: np.ndarray
    norm_weight: np.ndarray

    @property
    def n(self) -> int:
        return self.num_users + self.num_items

    @property
    def nnz(self) -> int:
        return int(self.indices.shape[0])

    @cached_property
    def rows(self) -> np.ndarray:
        return np.repeat(np.arange(self.n, dtype=np.int64), self.degree)

    def edge_tensors(self, dtype: torch.dtype = torch.float32) -> Tuple[torch.Tensor, torch.Tensor, torch.Tensor]:
        cache = self.__dict__.setdefault("_tensor_cache", {})
        if dtype not in cache:
            cache[dtype] = (
                torch.from_numpy(self.rows),
                torch.from_numpy(self.indices.astype(np.int64)),
                torch.from_numpy(self.norm_weight).to(dtype),
            )
        return cache[dtype]

    def to_scipy(self) -> sp.csr_matrix:
        return sp.csr_matrix((self.norm_weight, self.indices, self.indptr), shape=(self.n, self.n))


@dataclass(frozen=True)
class DegreePartition:
    k: int
    head_mask: np.ndarray

    @property
    def tail_mask(self) -> np.ndarray:
        return ~self.head_mask

    @property
    def head(self) -> np.ndarray:
        return np.flatnonzero(self.head_mask)

    @property
    def tail(self) -> np.ndarray:
        return np.flatnonzero(~self.head_mask)


def build_graph(train_edges: np.ndarray, num_users: int, num_items: int) -> BipartiteGraph:
    edges = np.asarray(train_edges, dtype=np.int64).reshape(-1, 2)
    if edges.size and (
        edges[:, 0].min() < 0 or edges[:, 0].max() >= num_users
        or edges[:, 1].min() < 0 or edges[:, 1].max() >= num_items
    ):
        raise DatasetError("índice de usuario o ítem fuera de rango al construir el grafo")

    n = num_users + num_items
    users = edges[:, 0]
    items = edges[:, 1] + num_users
    adj = sp.csr_matrix(
        (np.ones(2 * len(edges)), (np.concatenate([users, items]), np.concatenate([items, users]))),
        shape=(n, n),
    )
    adj.sum_duplicates()
    adj.sort_indices()
    adj.data[:] = 1.0

    indptr = adj.indptr.astype(np.int64)
    indices = adj.indices.astype(np.int64)
    degree = np.diff(indptr)

    zero_degree = int((degree == 0).sum())
    if zero_degree:
        logger.warning("zero_degree_nodes", count=zero_degree)

    rows = np.repeat(np.arange(n, dtype=np.int64), degree)
    norm_weight = 1.0 / np.sqrt(degree[rows].astype(np.float64) * degree[indices].astype(np.float64))

    return BipartiteGraph(
        num_users=num_users,
        num_items=num_items,
        indptr=indptr,
        indices=indices,
        degree=degree,
        norm_weight=norm_weight,
    )


def spmm(rows: torch.Tensor, cols: torch.Tensor, weight: torch.Tensor, X: torch.Tensor) -> torch.Tensor:
    """out_i = Σ_e weight_e · X[cols_e] sobre las aristas con rows_e = i"""
    out = torch.zeros_like(X)
    return out.index_add(0, rows, X[cols] * weight.unsqueeze(1))


def propagate(g: BipartiteGraph, X: torch.Tensor) -> torch.Tensor:
    if X.dim() != 2 or X.shape[0] != g.n:
        raise ShapeError(f"se esperaba una tabla de {g.n} filas, se recibió {tuple(X.shape)}")
    rows, cols, weight = g.edge_tensors(X.dtype)
    return spmm(rows, cols, weight, X)


def propagate_stack(g: BipartiteGraph, H0: torch.Tensor, layers: int) -> LayerStack:
    stack = [H0]
    for _ in range(layers):
        stack.append(propagate(g, stack[-1]))
    return stack


def readout(stack: Sequence[torch.Tensor]) -> torch.Tensor:
    if len(stack) == 0:
        raise ShapeError("pila de capas vacía")
    shape = stack[0].shape
    if any(layer.shape != shape for layer in stack):
        raise ShapeError("todas las capas deben tener la misma forma")
    return torch.stack(list(stack), dim=0).mean(dim=0)


def partition_degree(g: BipartiteGraph, k: int) -> DegreePartition:
    if k < 1:
        raise ValueError("el umbral k debe ser >= 1")
    return DegreePartition(k=k, head_mask=g.degree > k)
