"""
Aumentación de cola larga: auto drop, transferencia de conocimiento y pérdida de traducción
"""
from dataclasses import dataclass
from typing import Optional, Sequence

import numpy as np
import torch
import torch.nn.functional as F

from app.models.strategy_enum import AugmentSides
from app.utils.exceptions import ShapeError
from app.utils.graph import BipartiteGraph, DegreePartition, LayerStack, spmm

LEAKY_SLOPE = 0.2


@dataclass(frozen=True, eq=False)
class DroppedGraph:
    """Vecindarios retenidos N̂_i; la selección queda congelada, los pesos Â se recalculan"""
    n: int
    edge_ids: np.ndarray
    rows: np.ndarray
    cols: np.ndarray
    budgets: np.ndarray
    delta: float
    learnable: bool = True

    def retained(self, node: int) -> np.ndarray:
        return self.cols[self.rows == node]

    def smoothed_weights(self, scores: torch.Tensor) -> torch.Tensor:
        if not self.learnable:
            return torch.ones(len(self.edge_ids), dtype=scores.dtype)
        selected = scores[torch.from_numpy(self.edge_ids)]
        return torch.sigmoid(self.delta * selected)


def edge_scores(g: BipartiteGraph, H0: torch.Tensor, W_s: torch.Tensor) -> torch.Tensor:
    """S_ij = H0_i · W_s · H0_jᵀ para cada arista dirigida del CSR"""
    if H0.dim() != 2 or H0.shape[0] != g.n:
        raise ShapeError(f"H0 debe tener {g.n} filas, tiene forma {tuple(H0.shape)}")
    d = H0.shape[1]
    if tuple(W_s.shape) != (d, d):
        raise ShapeError(f"W_s debe ser {d}x{d}, es {tuple(W_s.shape)}")
    rows, cols, _ = g.edge_tensors(H0.dtype)
    return ((H0 @ W_s)[rows] * H0[cols]).sum(dim=1)


def _side_mask(g: BipartiteGraph, sides: AugmentSides) -> np.ndarray:
    mask = np.zeros(g.n, dtype=bool)
    if sides in (AugmentSides.USERS, AugmentSides.BOTH):
        mask[:g.num_users] = True
    if sides in (AugmentSides.ITEMS, AugmentSides.BOTH):
        mask[g.num_users:] = True
    return mask


def sample_budgets(
    g: BipartiteGraph,
    partition: DegreePartition,
    k: int,
    rng: np.random.Generator,
    sides: AugmentSides = AugmentSides.BOTH,
) -> np.ndarray:
    """k_i ~ Uniforme{1..k} para nodos cabeza, k_i = D_ii para el resto"""
    if k < 1:
        raise ValueError("k debe ser >= 1")
    budgets = g.degree.astype(np.int64).copy()
    head = np.flatnonzero(partition.head_mask & _side_mask(g, sides))
    budgets[head] = rng.integers(1, k + 1, size=len(head))
    return budgets


def build_dropped_graph(
    g: BipartiteGraph,
    S: torch.Tensor,
    budgets: np.ndarray,
    delta: float,
    learnable: bool = True,
    rng: Optional[np.random.Generator] = None,
) -> DroppedGraph:
    if delta <= 0:
        raise ValueError("delta debe ser > 0")
    if learnable:
        key = S.detach().cpu().double().numpy()
    else:
        if rng is None:
            raise ValueError("el descarte aleatorio requiere un generador")
        key = rng.random(g.nnz)

    # fila ascendente, puntaje descendente, vecino ascendente
    order = np.lexsort((g.indices, -key, g.rows))
    row_of = g.rows[order]
    rank = np.arange(g.nnz) - g.indptr[row_of]
    edge_ids = np.sort(order[rank < budgets[row_of]])

    return DroppedGraph(
        n=g.n,
        edge_ids=edge_ids,
        rows=g.rows[edge_ids],
        cols=g.indices[edge_ids],
        budgets=np.asarray(budgets, dtype=np.int64),
        delta=float(delta),
        learnable=learnable,
    )


def knowledge_transfer(h_center: torch.Tensor, h_neigh_mean: torch.Tensor, layer_params) -> torch.Tensor:
    """m = W2ᵀ·LeakyReLU(W1ᵀ·[h ; h_N] + b1) + b2, en forma de filas"""
    x = torch.cat([h_center, h_neigh_mean], dim=-1)
    hidden = F.leaky_relu(x @ layer_params.W1 + layer_params.b1, negative_slope=LEAKY_SLOPE)
    return hidden @ layer_params.W2 + layer_params.b2


def _inverse_sqrt(values: torch.Tensor) -> torch.Tensor:
    positive = values > 0
    safe = torch.where(positive, values, torch.ones_like(values))
    return torch.where(positive, safe.rsqrt(), torch.zeros_like(values))


def aggregate_dropped(
    dg: DroppedGraph,
    weights: torch.Tensor,
    H0: torch.Tensor,
    layers: int,
    with_kt: bool = False,
    transfer: Optional[Sequence] = None,
) -> LayerStack:
    if H0.shape[0] != dg.n:
        raise ShapeError(f"H0 debe tener {dg.n} filas, tiene {H0.shape[0]}")
    if weights.shape[0] != len(dg.edge_ids):
        raise ShapeError("un peso por arista retenida")
    if with_kt and (transfer is None or len(transfer) < layers):
        raise ShapeError(f"se necesitan {layers} grupos de transferencia")

    rows = torch.from_numpy(dg.rows)
    cols = torch.from_numpy(dg.cols)

    size_hat = torch.zeros(dg.n, dtype=H0.dtype).index_add(0, rows, weights)
    inv_sqrt = _inverse_sqrt(size_hat)
    coef = inv_sqrt[rows] * inv_sqrt[cols]

    counts = torch.bincount(rows, minlength=dg.n).to(H0.dtype)
    mean_coef = (1.0 / counts.clamp_min(1.0))[rows]

    stack = [H0]
    for layer in range(layers):
        prev = stack[-1]
        out = spmm(rows, cols, coef, prev)
        if with_kt:
            neigh_mean = spmm(rows, cols, mean_coef, prev)
            out = out + knowledge_transfer(prev, neigh_mean, transfer[layer])
        stack.append(out)
    return stack


def translation_loss(full_stack: LayerStack, dropped_kt_stack: LayerStack, head: np.ndarray) -> torch.Tensor:
    """Σ_{i cabeza} Σ_{l=1..L} ‖h_i⁽ˡ⁾ − ĥ_i⁽ˡ⁾‖²"""
    if len(full_stack) != len(dropped_kt_stack):
        raise ShapeError("las pilas deben tener el mismo número de capas")
    if any(a.shape != b.shape for a, b in zip(full_stack, dropped_kt_stack)):
        raise ShapeError("las pilas deben compartir forma")
    loss = full_stack[0].new_zeros(())
    if len(head) == 0:
        return loss
    idx = torch.as_tensor(head, dtype=torch.long)
    for full, hat in zip(full_stack[1:], dropped_kt_stack[1:]):
        loss = loss + ((full[idx] - hat[idx]) ** 2).sum()
    return loss
