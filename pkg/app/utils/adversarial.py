"""
Discriminadores cabeza/cola y pérdidas adversariales
"""
from types import SimpleNamespace

import torch
import torch.nn.functional as F

from app.utils.graph import DegreePartition

PROB_CLAMP = 1e-7
LEAKY_SLOPE = 0.2


def _frozen(p):
    return SimpleNamespace(W_d=p.W_d.detach(), b_d=p.b_d.detach(), w_d=p.w_d.detach())


def discriminate(h: torch.Tensor, p, frozen: bool = False) -> torch.Tensor:
    """σ(w_dᵀ·LeakyReLU(W_d·h + b_d)) recortada a [1e-7, 1−1e-7]"""
    if frozen:
        p = _frozen(p)
    hidden = F.leaky_relu(h @ p.W_d.T + p.b_d, negative_slope=LEAKY_SLOPE)
    return torch.sigmoid(hidden @ p.w_d).clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)


def cross_entropy(label: float, prob: torch.Tensor) -> torch.Tensor:
    prob = prob.clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)
    return -(label * torch.log(prob) + (1.0 - label) * torch.log1p(-prob))


def _index(mask) -> torch.Tensor:
    return torch.from_numpy(mask.nonzero()[0])


def tail_adversarial_loss(h: torch.Tensor, h_tilde: torch.Tensor, partition: DegreePartition, p_tail) -> torch.Tensor:
    """Pseudo-cola (fuera de V_tail, etiqueta 0) contra cola real (etiqueta 1)"""
    pseudo = h_tilde[_index(partition.head_mask)]
    real = h[_index(partition.tail_mask)]
    return cross_entropy(0.0, discriminate(pseudo, p_tail)).sum() + cross_entropy(1.0, discriminate(real, p_tail)).sum()


def head_adversarial_loss(h: torch.Tensor, h_hat: torch.Tensor, partition: DegreePartition, p_head) -> torch.Tensor:
    """Pseudo-cabeza (todos los nodos, etiqueta 0) contra cabeza real (etiqueta 1)"""
    real = h[_index(partition.head_mask)]
    return cross_entropy(0.0, discriminate(h_hat, p_head)).sum() + cross_entropy(1.0, discriminate(real, p_head)).sum()


def generator_adversarial_loss(
    h_tilde: torch.Tensor,
    h_hat: torch.Tensor,
    partition: DegreePartition,
    p_tail,
    p_head,
) -> torch.Tensor:
    """Objetivo del generador con etiquetas invertidas; los discriminadores no reciben gradiente"""
    pseudo_tail = h_tilde[_index(partition.head_mask)]
    loss = cross_entropy(1.0, discriminate(pseudo_tail, p_tail, frozen=True)).sum()
    if h_hat is not None:
        loss = loss + cross_entropy(1.0, discriminate(h_hat, p_head, frozen=True)).sum()
    return loss
