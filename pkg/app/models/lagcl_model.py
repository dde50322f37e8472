"""
Modelo LAGCL: tabla de embeddings, puntuador de aristas, transferencia de conocimiento y discriminadores
"""
from collections import OrderedDict
from dataclasses import dataclass
from typing import Dict, List, Optional, Tuple

import numpy as np
import torch
from torch import nn

from app.models.strategy_enum import CLDenominator
from app.schemas.training import Hyperparams
from app.utils.adversarial import generator_adversarial_loss, head_adversarial_loss, tail_adversarial_loss
from app.utils.augment import (
    DroppedGraph,
    aggregate_dropped,
    build_dropped_graph,
    edge_scores,
    sample_budgets,
    translation_loss,
)
from app.utils.contrastive import NoiseSpec, ViewPair, augmented_embeddings, draw_noise, info_nce, perturbed_view
from app.utils.exceptions import CheckpointError
from app.utils.graph import BipartiteGraph, DegreePartition, propagate_stack, readout
from app.utils.objectives import bpr_loss, total_loss
from app.utils.sampling import BprBatch, sample_bpr_batch


class EdgeScorer(nn.Module):

    def __init__(self, d: int, dtype: torch.dtype):
        super().__init__()
        self.W_s = nn.Parameter(torch.empty(d, d, dtype=dtype))


class KnowledgeTransfer(nn.Module):
    """MLP de una capa oculta sobre [h ; media de vecinos]"""

    def __init__(self, d: int, dtype: torch.dtype):
        super().__init__()
        self.W1 = nn.Parameter(torch.empty(2 * d, d, dtype=dtype))
        self.b1 = nn.Parameter(torch.zeros(d, dtype=dtype))
        self.W2 = nn.Parameter(torch.empty(d, d, dtype=dtype))
        self.b2 = nn.Parameter(torch.zeros(d, dtype=dtype))


class Discriminator(nn.Module):

    def __init__(self, d: int, dtype: torch.dtype):
        super().__init__()
        self.W_d = nn.Parameter(torch.empty(d, d, dtype=dtype))
        self.b_d = nn.Parameter(torch.zeros(d, dtype=dtype))
        self.w_d = nn.Parameter(torch.empty(d, dtype=dtype))


@dataclass
class SampleStreams:
    """Flujos aleatorios independientes: lotes BPR, presupuestos/descarte y semilla de ruido"""
    bpr: np.random.Generator
    budget: np.random.Generator
    noise_seed: int

    @classmethod
    def from_seed(cls, seed: int) -> "SampleStreams":
        bpr, budget, noise = np.random.SeedSequence(seed).spawn(3)
        return cls(
            bpr=np.random.default_rng(bpr),
            budget=np.random.default_rng(budget),
            noise_seed=int(noise.generate_state(1)[0]),
        )


@dataclass
class StepSample:
    """Elementos estocásticos de un paso, congelados para el paso y para la verificación de gradientes"""
    batch: BprBatch
    cl_users: np.ndarray
    cl_items: np.ndarray
    dropped: Optional[DroppedGraph] = None
    noise: Optional[Tuple[List[torch.Tensor], List[torch.Tensor]]] = None


ZERO_INIT_NAMES = ("b1", "b2", "b_d", "W2")


class LAGCLModel(nn.Module):

    def __init__(self, num_users: int, num_items: int, hp: Hyperparams, dtype: torch.dtype = torch.float32):
        super().__init__()
        self.num_users = num_users
        self.num_items = num_items
        self.hp = hp
        d = hp.embedding_dim
        self.embedding = nn.Parameter(torch.empty(num_users + num_items, d, dtype=dtype))
        self.scorer = EdgeScorer(d, dtype)
        self.transfer = nn.ModuleList([KnowledgeTransfer(d, dtype) for _ in range(hp.layers)])
        self.disc_tail = Discriminator(d, dtype)
        self.disc_head = Discriminator(d, dtype)
        self.reset_parameters(hp.seed)

    @property
    def n(self) -> int:
        return self.num_users + self.num_items

    def reset_parameters(self, seed: int):
        """Xavier uniforme en pesos y embeddings; sesgos y salida W2 de la transferencia en cero.

        Con W2 = 0 la lectura aumentada coincide con la propagación simple al inicio.
        """
        gen = torch.Generator().manual_seed(int(seed))
        with torch.no_grad():
            for name, p in self.named_parameters():
                leaf = name.rsplit(".", 1)[-1]
                if leaf in ZERO_INIT_NAMES:
                    p.zero_()
                elif p.dim() == 1:
                    nn.init.xavier_uniform_(p.view(-1, 1), generator=gen)
                else:
                    nn.init.xavier_uniform_(p, generator=gen)

    # --- componentes activos ---

    def active_components(self) -> Tuple[str, ...]:
        hp = self.hp
        active = ["rec"]
        if hp.use_kt and hp.lambda_trans > 0:
            active.append("trans")
        if hp.use_adversarial and hp.lambda_adv > 0:
            active.append("adv")
        if hp.use_cl and hp.lambda_cl > 0:
            active.append("cl")
        return tuple(active)

    def needs_dropped_graph(self) -> bool:
        active = self.active_components()
        return "trans" in active or "adv" in active

    def generator_parameters(self) -> List[nn.Parameter]:
        params = [self.embedding]
        if self.hp.use_auto_drop and self.needs_dropped_graph():
            params.append(self.scorer.W_s)
        if self.hp.use_kt:
            params.extend(self.transfer.parameters())
        return params

    def discriminator_parameters(self) -> List[nn.Parameter]:
        return list(self.disc_tail.parameters()) + list(self.disc_head.parameters())

    # --- muestreo ---

    def draw_step_sample(
        self,
        g: BipartiteGraph,
        partition: DegreePartition,
        train_edges: np.ndarray,
        streams: SampleStreams,
        step: int,
    ) -> StepSample:
        hp = self.hp
        batch = sample_bpr_batch(train_edges, self.num_items, hp.batch_size, streams.bpr)

        dropped = None
        if self.needs_dropped_graph():
            budgets = sample_budgets(g, partition, hp.degree_threshold, streams.budget, hp.augment_sides)
            scores = None
            if hp.use_auto_drop:
                with torch.no_grad():
                    scores = edge_scores(g, self.embedding, self.scorer.W_s)
            dropped = build_dropped_graph(
                g, scores, budgets, hp.delta, learnable=hp.use_auto_drop, rng=streams.budget
            )

        noise = None
        if "cl" in self.active_components():
            spec = NoiseSpec(epsilon=hp.epsilon, seed=streams.noise_seed)
            noise = tuple(
                draw_noise(spec, self.n, hp.embedding_dim, hp.layers, view=view, step=step) for view in (0, 1)
            )

        if hp.cl_denominator == CLDenominator.ALL:
            cl_users = np.arange(self.num_users, dtype=np.int64)
            cl_items = np.arange(self.num_users, self.n, dtype=np.int64)
        else:
            cl_users = np.unique(batch.users)
            cl_items = np.unique(batch.positives) + self.num_users

        return StepSample(batch=batch, cl_users=cl_users, cl_items=cl_items, dropped=dropped, noise=noise)

    # --- ramas ---

    def _transfer(self):
        return self.transfer if self.hp.use_kt else None

    def recommendation_readout(self, g: BipartiteGraph, partition: DegreePartition) -> torch.Tensor:
        """Embeddings finales sin ruido; con KT sobre los nodos del alcance configurado"""
        hp = self.hp
        if hp.use_kt:
            stack = augmented_embeddings(g, self.embedding, hp.layers, self.transfer, hp.kt_scope, partition)
        else:
            stack = propagate_stack(g, self.embedding, hp.layers)
        return readout(stack)

    def _dropped_weights(self, g: BipartiteGraph, dg: DroppedGraph) -> torch.Tensor:
        if not dg.learnable:
            return dg.smoothed_weights(self.embedding.new_empty(0))
        return dg.smoothed_weights(edge_scores(g, self.embedding, self.scorer.W_s))

    def _dropped_readouts(self, g: BipartiteGraph, dg: DroppedGraph):
        weights = self._dropped_weights(g, dg)
        H0 = self.embedding
        hat_stack = None
        if self.hp.use_kt:
            hat_stack = aggregate_dropped(dg, weights, H0, self.hp.layers, with_kt=True, transfer=self.transfer)
        tilde_stack = aggregate_dropped(dg, weights, H0, self.hp.layers, with_kt=False)
        return tilde_stack, hat_stack

    def contrastive_views(self, g: BipartiteGraph, partition: DegreePartition, sample: StepSample) -> ViewPair:
        hp = self.hp
        first, second = (
            perturbed_view(g, self.embedding, hp.layers, draws, hp.epsilon, self._transfer(), hp.kt_scope, partition)
            for draws in sample.noise
        )
        return ViewPair(first=first, second=second)

    def forward(self, g: BipartiteGraph, partition: DegreePartition, sample: StepSample) -> Dict[str, torch.Tensor]:
        hp = self.hp
        active = self.active_components()
        components: Dict[str, torch.Tensor] = {}
        components["rec"] = bpr_loss(sample.batch, self.recommendation_readout(g, partition), self.num_users)

        if "trans" in active or "adv" in active:
            full_stack = propagate_stack(g, self.embedding, hp.layers)
            tilde_stack, hat_stack = self._dropped_readouts(g, sample.dropped)
            if "trans" in active:
                components["trans"] = translation_loss(full_stack, hat_stack, partition.head)
            if "adv" in active:
                components["adv"] = generator_adversarial_loss(
                    readout(tilde_stack),
                    readout(hat_stack) if hat_stack is not None else None,
                    partition,
                    self.disc_tail,
                    self.disc_head,
                )

        if "cl" in active:
            views = self.contrastive_views(g, partition, sample)
            loss = views.first.new_zeros(())
            for subset in (sample.cl_users, sample.cl_items):
                if len(subset):
                    loss = loss + info_nce(views.first, views.second, subset, hp.tau)
            components["cl"] = loss
        return components

    def objective(self, components: Dict[str, torch.Tensor]) -> torch.Tensor:
        hp = self.hp
        lambdas = (hp.lambda_trans, hp.lambda_adv, hp.lambda_cl, hp.lambda_reg)
        return total_loss(components, lambdas, self.generator_parameters())

    def discriminator_loss(self, g: BipartiteGraph, partition: DegreePartition, sample: StepSample) -> torch.Tensor:
        """L_tail-disc + L_head-disc con los embeddings del generador congelados"""
        with torch.no_grad():
            h = readout(propagate_stack(g, self.embedding, self.hp.layers))
            tilde_stack, hat_stack = self._dropped_readouts(g, sample.dropped)
            h_tilde = readout(tilde_stack)
            h_hat = readout(hat_stack) if hat_stack is not None else None
        loss = tail_adversarial_loss(h, h_tilde, partition, self.disc_tail)
        if h_hat is not None:
            loss = loss + head_adversarial_loss(h, h_hat, partition, self.disc_head)
        return loss

    # --- exportación ---

    def export_arrays(self) -> "OrderedDict[str, np.ndarray]":
        arrays = OrderedDict()
        for name, tensor in self.state_dict().items():
            arrays[name] = tensor.detach().cpu().numpy().astype("<f4")
        return arrays

    def load_arrays(self, arrays: Dict[str, np.ndarray]):
        state = self.state_dict()
        missing = [name for name in state if name not in arrays]
        if missing:
            raise CheckpointError(f"faltan arreglos en el checkpoint: {', '.join(missing)}")
        for name, tensor in state.items():
            if tuple(arrays[name].shape) != tuple(tensor.shape):
                raise CheckpointError(
                    f"forma incompatible para {name}: {tuple(arrays[name].shape)} vs {tuple(tensor.shape)}"
                )
        with torch.no_grad():
            for name, tensor in state.items():
                tensor.copy_(torch.from_numpy(np.ascontiguousarray(arrays[name])).to(tensor.dtype))
