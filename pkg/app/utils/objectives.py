"""
Pérdida BPR y ensamblado del objetivo multitarea
"""
from typing import Iterable, Mapping, Sequence

import torch

from app.utils.adversarial import PROB_CLAMP
from app.utils.sampling import BprBatch

COMPONENTS = ("rec", "trans", "adv", "cl")


def bpr_loss(batch: BprBatch, final_embeddings: torch.Tensor, num_users: int) -> torch.Tensor:
    """Σ −log σ(ŷ_ui − ŷ_uj) con ŷ producto punto de filas usuario/ítem"""
    users = torch.from_numpy(batch.users)
    pos = torch.from_numpy(batch.positives) + num_users
    neg = torch.from_numpy(batch.negatives) + num_users
    u = final_embeddings[users]
    diff = (u * final_embeddings[pos]).sum(dim=1) - (u * final_embeddings[neg]).sum(dim=1)
    prob = torch.sigmoid(diff).clamp(PROB_CLAMP, 1.0 - PROB_CLAMP)
    return -torch.log(prob).sum()


def squared_norm(theta: Iterable[torch.Tensor]) -> torch.Tensor:
    total = None
    for p in theta:
        term = (p ** 2).sum()
        total = term if total is None else total + term
    return total if total is not None else torch.zeros(())


def total_loss(components: Mapping[str, torch.Tensor], lambdas: Sequence[float], theta: Iterable[torch.Tensor]) -> torch.Tensor:
    """L_rec + λ1·L_trans + λ2·L_adv + λ3·L_cl + λ4·‖Θ‖²; componentes ausentes cuentan 0"""
    lambda_trans, lambda_adv, lambda_cl, lambda_reg = lambdas
    loss = components["rec"]
    for name, weight in (("trans", lambda_trans), ("adv", lambda_adv), ("cl", lambda_cl)):
        if weight and name in components:
            loss = loss + weight * components[name]
    if lambda_reg:
        loss = loss + lambda_reg * squared_norm(theta)
    return loss
