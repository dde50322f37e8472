"""
Verificación de gradientes por diferencias centrales
"""
import math
from dataclasses import dataclass
from typing import Callable, Sequence

import torch

from app.utils.exceptions import TrainingDivergedError


@dataclass
class GradCheckResult:
    max_relative_error: float
    max_abs_error: float
    max_abs_gradient: float
    checked: int


def relative_error(g_impl: float, g_fd: float) -> float:
    return abs(g_impl - g_fd) / max(1e-8, abs(g_fd) + abs(g_impl))


def gradient_check(
    loss_fn: Callable[[], torch.Tensor],
    params: Sequence[torch.nn.Parameter],
    h_step: float = 1e-5,
) -> GradCheckResult:
    loss = loss_fn()
    if not torch.isfinite(loss):
        raise TrainingDivergedError("pérdida no finita en la verificación de gradientes")
    grads = torch.autograd.grad(loss, list(params), allow_unused=True)

    worst_rel = 0.0
    worst_abs = 0.0
    largest = 0.0
    checked = 0
    for p, grad in zip(params, grads):
        flat = p.data.view(-1)
        g_flat = grad.reshape(-1) if grad is not None else torch.zeros_like(flat)
        for k in range(flat.numel()):
            original = flat[k].item()
            with torch.no_grad():
                flat[k] = original + h_step
                upper = loss_fn().item()
                flat[k] = original - h_step
                lower = loss_fn().item()
                flat[k] = original
            if not (math.isfinite(upper) and math.isfinite(lower)):
                raise TrainingDivergedError("pérdida no finita durante las diferencias finitas")
            g_fd = (upper - lower) / (2.0 * h_step)
            g_impl = g_flat[k].item()
            worst_rel = max(worst_rel, relative_error(g_impl, g_fd))
            worst_abs = max(worst_abs, abs(g_impl - g_fd))
            largest = max(largest, abs(g_impl), abs(g_fd))
            checked += 1

    return GradCheckResult(
        max_relative_error=worst_rel,
        max_abs_error=worst_abs,
        max_abs_gradient=largest,
        checked=checked,
    )
