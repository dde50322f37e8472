"""
Vistas contrastivas por ruido y pérdida InfoNCE
"""
from dataclasses import dataclass
from typing import List, Optional, Sequence

import numpy as np
import torch
import torch.nn.functional as F

from app.models.strategy_enum import KTScope
from app.utils.augment import knowledge_transfer
from app.utils.graph import BipartiteGraph, DegreePartition, LayerStack, propagate, spmm


@dataclass(frozen=True)
class NoiseSpec:
    epsilon: float
    seed: int

    def __post_init__(self):
        if not (np.isfinite(self.epsilon) and self.epsilon > 0):
            raise ValueError("epsilon debe ser finito y positivo")


@dataclass
class ViewPair:
    first: torch.Tensor
    second: torch.Tensor


def kt_mask(partition: DegreePartition, scope: KTScope) -> np.ndarray:
    if scope == KTScope.ALL_NODES:
        return np.ones_like(partition.head_mask)
    return partition.tail_mask


def _neighbor_mean(g: BipartiteGraph, X: torch.Tensor) -> torch.Tensor:
    rows, cols, _ = g.edge_tensors(X.dtype)
    degree = torch.from_numpy(g.degree).to(X.dtype)
    return spmm(rows, cols, (1.0 / degree.clamp_min(1.0))[rows], X)


def _augmented_layer(g: BipartiteGraph, prev: torch.Tensor, layer_params, mask: Optional[torch.Tensor]) -> torch.Tensor:
    out = propagate(g, prev)
    if layer_params is None or mask is None:
        return out
    m = knowledge_transfer(prev, _neighbor_mean(g, prev), layer_params)
    return out + m * mask.unsqueeze(1)


def augmented_embeddings(
    g: BipartiteGraph,
    H0: torch.Tensor,
    layers: int,
    transfer: Optional[Sequence] = None,
    scope: KTScope = KTScope.TAIL_ONLY,
    partition: Optional[DegreePartition] = None,
) -> LayerStack:
    """Propagación sobre el grafo completo más la predicción de vecinos faltantes"""
    mask = None
    if transfer is not None:
        if partition is None:
            raise ValueError("se requiere la partición cabeza/cola")
        mask = torch.from_numpy(kt_mask(partition, scope)).to(H0.dtype)
    stack = [H0]
    for layer in range(layers):
        params = transfer[layer] if transfer is not None else None
        stack.append(_augmented_layer(g, stack[-1], params, mask))
    return stack


def draw_noise(spec: NoiseSpec, n: int, d: int, layers: int, view: int, step: int = 0) -> List[torch.Tensor]:
    """Δ̄ ~ U(0,1)^d por nodo; flujo Philox indexado por (semilla, paso, vista, capa)"""
    draws = []
    for layer in range(1, layers + 1):
        seq = np.random.SeedSequence([spec.seed, step, view, layer])
        rng = np.random.Generator(np.random.Philox(seq))
        draws.append(torch.from_numpy(rng.random((n, d))))
    return draws


def perturb(h: torch.Tensor, delta_bar: torch.Tensor, epsilon: float) -> torch.Tensor:
    """h + ε·(Δ̄ ⊙ sign(h)) / ‖Δ̄ ⊙ sign(h)‖₂; filas nulas quedan intactas"""
    direction = delta_bar.to(h.dtype) * torch.sign(h.detach())
    norm = direction.norm(dim=1, keepdim=True)
    delta = torch.where(norm > 0, epsilon * direction / norm.clamp_min(1e-30), torch.zeros_like(direction))
    return h + delta


def perturbed_view(
    g: BipartiteGraph,
    H0: torch.Tensor,
    layers: int,
    noise: Sequence[torch.Tensor],
    epsilon: float,
    transfer: Optional[Sequence] = None,
    scope: KTScope = KTScope.TAIL_ONLY,
    partition: Optional[DegreePartition] = None,
) -> torch.Tensor:
    """Ruido en las capas 1..L; la lectura de la vista promedia solo esas L salidas"""
    mask = None
    if transfer is not None:
        mask = torch.from_numpy(kt_mask(partition, scope)).to(H0.dtype)
    prev = H0
    outputs = []
    for layer in range(layers):
        params = transfer[layer] if transfer is not None else None
        prev = perturb(_augmented_layer(g, prev, params, mask), noise[layer], epsilon)
        outputs.append(prev)
    return torch.stack(outputs, dim=0).mean(dim=0)


def info_nce(view_a: torch.Tensor, view_b: torch.Tensor, subset, tau: float) -> torch.Tensor:
    if tau <= 0:
        raise ValueError("tau debe ser > 0")
    idx = torch.as_tensor(subset, dtype=torch.long)
    if idx.numel() == 0:
        raise ValueError("el subconjunto de nodos no puede estar vacío")
    a = F.normalize(view_a[idx], dim=1)
    b = F.normalize(view_b[idx], dim=1)
    logits = a @ b.T / tau
    return -(torch.diagonal(logits) - torch.logsumexp(logits, dim=1)).sum()
