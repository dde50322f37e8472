"""
Servicio de entrenamiento: bucle alternado discriminador/generador, early stopping y verificación de gradientes
"""
import math
import time
from collections import OrderedDict
from dataclasses import dataclass, field
from typing import List, Optional, Tuple

import structlog
import torch

from app.models.checkpoint_model import FINAL_EMBEDDINGS, Checkpoint
from app.models.dataset_model import SplitDataset
from app.models.lagcl_model import LAGCLModel, SampleStreams
from app.repositories import CheckpointRepository, ReportRepository
from app.schemas.training import EpochLog, Hyperparams, TrainingSummary
from app.utils.audit import AuditLogger
from app.utils.exceptions import ConfigError, DatasetError, EvaluationError, LagclError, TrainingDivergedError
from app.utils.gradcheck import GradCheckResult, gradient_check
from app.utils.graph import build_graph, partition_degree
from app.utils.metrics import metrics
from app.utils.storage import ArtifactStore

logger = structlog.get_logger(__name__)

ADAM_BETAS = (0.9, 0.999)
ADAM_EPS = 1e-8
GRADIENT_SELECTORS = ("rec", "trans", "adv", "disc", "cl", "total")
JITTER_SCALE = 0.1
TRAIN_LOG_NAME = "train_log.jsonl"


@dataclass
class TrainingRun:
    checkpoint: Checkpoint
    history: List[EpochLog] = field(default_factory=list)
    epoch_wall_times: List[float] = field(default_factory=list)


def _validation(model: LAGCLModel, split: SplitDataset, g, partition, hp: Hyperparams) -> Optional[Tuple[float, float]]:
    if len(split.val) == 0:
        return None
    with torch.no_grad():
        embeddings = model.recommendation_readout(g, partition).double().numpy()
    try:
        report = metrics(
            split,
            embeddings,
            k=min(hp.eval_k, split.num_items),
            phase="val",
            batch_users=hp.eval_batch_users,
        )
    except EvaluationError:
        return None
    return report.recall, report.ndcg


def _snapshot(model: LAGCLModel) -> "OrderedDict[str, torch.Tensor]":
    return OrderedDict((name, t.detach().clone()) for name, t in model.state_dict().items())


def train(split: SplitDataset, hp: Hyperparams) -> TrainingRun:
    """Entrena y devuelve el checkpoint con los parámetros de mejor validación"""
    if len(split.train) == 0:
        raise DatasetError("el split de entrenamiento está vacío")

    g = build_graph(split.train, split.num_users, split.num_items)
    partition = partition_degree(g, hp.degree_threshold)
    model = LAGCLModel(split.num_users, split.num_items, hp)
    streams = SampleStreams.from_seed(hp.seed)
    active = model.active_components()

    gen_opt = torch.optim.Adam(model.generator_parameters(), lr=hp.learning_rate, betas=ADAM_BETAS, eps=ADAM_EPS)
    disc_opt = None
    if "adv" in active:
        disc_opt = torch.optim.Adam(
            model.discriminator_parameters(), lr=hp.disc_learning_rate, betas=ADAM_BETAS, eps=ADAM_EPS
        )

    logger.info(
        "training_started",
        users=split.num_users,
        items=split.num_items,
        train_edges=int(len(split.train)),
        head_nodes=int(partition.head_mask.sum()),
        components=list(active),
    )

    steps_per_epoch = max(1, math.ceil(len(split.train) / hp.batch_size))
    initial = _validation(model, split, g, partition, hp)
    best_state = _snapshot(model)
    best_epoch = 0
    best = initial
    stale = 0
    stopped_early = False
    history: List[EpochLog] = []
    wall_times: List[float] = []
    step = 0

    for epoch in range(1, hp.epochs + 1):
        started = time.perf_counter()
        sums = OrderedDict((name, 0.0) for name in active + (("disc",) if disc_opt else ()) + ("total",))

        for _ in range(steps_per_epoch):
            sample = model.draw_step_sample(g, partition, split.train, streams, step)

            if disc_opt is not None:
                for _ in range(hp.disc_steps):
                    disc_opt.zero_grad()
                    disc_loss = model.discriminator_loss(g, partition, sample)
                    if not torch.isfinite(disc_loss):
                        raise TrainingDivergedError(f"pérdida del discriminador no finita en la época {epoch}")
                    disc_loss.backward()
                    disc_opt.step()
                    sums["disc"] += disc_loss.item()

            gen_opt.zero_grad()
            components = model(g, partition, sample)
            loss = model.objective(components)
            if not torch.isfinite(loss):
                raise TrainingDivergedError(f"pérdida total no finita en la época {epoch}, paso {step}")
            loss.backward()
            gen_opt.step()

            for name, value in components.items():
                sums[name] += value.item()
            sums["total"] += loss.item()
            step += 1

        validation = _validation(model, split, g, partition, hp)
        wall_times.append(time.perf_counter() - started)
        entry = EpochLog(
            epoch=epoch,
            losses=dict(sums),
            val_recall=validation[0] if validation else None,
            val_ndcg=validation[1] if validation else None,
        )
        history.append(entry)
        logger.info("epoch_finished", epoch=epoch, wall_seconds=round(wall_times[-1], 3), **entry.losses,
                    val_recall=entry.val_recall, val_ndcg=entry.val_ndcg)

        if validation is None:
            best_state, best_epoch = _snapshot(model), epoch
            continue
        if best is None or validation[0] > best[0]:
            best, best_epoch, stale = validation, epoch, 0
            best_state = _snapshot(model)
        else:
            stale += 1
            if stale >= hp.patience:
                stopped_early = True
                AuditLogger.log_action(
                    action="early_stop",
                    resource="training",
                    details={"epoch": epoch, "best_epoch": best_epoch},
                )
                break

    model.load_state_dict(best_state)
    with torch.no_grad():
        final = model.recommendation_readout(g, partition).numpy().astype("<f4")

    arrays = model.export_arrays()
    arrays[FINAL_EMBEDDINGS] = final
    summary = TrainingSummary(
        epochs_run=len(history),
        best_epoch=best_epoch,
        best_val_recall=best[0] if best else None,
        best_val_ndcg=best[1] if best else None,
        initial_val_recall=initial[0] if initial else None,
        stopped_early=stopped_early,
        history=history,
    )
    checkpoint = Checkpoint(
        hyperparams=hp,
        num_users=split.num_users,
        num_items=split.num_items,
        arrays=arrays,
        training=summary,
    )
    return TrainingRun(checkpoint=checkpoint, history=history, epoch_wall_times=wall_times)


def _jitter(model: LAGCLModel, seed: int, scale: float = JITTER_SCALE):
    """Punto de verificación genérico: ruido sembrado sobre todos los parámetros, incluidos los que inician en cero"""
    gen = torch.Generator().manual_seed(int(seed))
    with torch.no_grad():
        for p in model.parameters():
            p.add_(scale * torch.randn(p.shape, generator=gen, dtype=p.dtype))


def gradient_check_instance(
    split: SplitDataset,
    hp: Hyperparams,
    selector: str,
    h_step: float = 1e-5,
    step: int = 0,
) -> GradCheckResult:
    """Diferencias centrales en 64 bits con presupuestos, top-k, ruido y lote congelados"""
    if selector not in GRADIENT_SELECTORS:
        raise ConfigError("selector", f"debe ser uno de {', '.join(GRADIENT_SELECTORS)}")
    g = build_graph(split.train, split.num_users, split.num_items)
    partition = partition_degree(g, hp.degree_threshold)
    model = LAGCLModel(split.num_users, split.num_items, hp, dtype=torch.float64)
    _jitter(model, hp.seed)
    sample = model.draw_step_sample(g, partition, split.train, SampleStreams.from_seed(hp.seed), step)

    if selector == "disc":
        if sample.dropped is None:
            raise ConfigError("selector", "la pérdida del discriminador requiere el módulo adversarial activo")
        return gradient_check(lambda: model.discriminator_loss(g, partition, sample), model.discriminator_parameters(), h_step)
    if selector == "total":
        return gradient_check(lambda: model.objective(model(g, partition, sample)), model.generator_parameters(), h_step)
    if selector not in model.active_components():
        raise ConfigError("selector", f"el componente {selector} no está activo en esta configuración")
    return gradient_check(lambda: model(g, partition, sample)[selector], model.generator_parameters(), h_step)


class TrainingService:

    def __init__(self, store: ArtifactStore):
        self.store = store
        self.checkpoint_repo = CheckpointRepository(store)
        self.report_repo = ReportRepository(store)

    def train(self, split: SplitDataset, hp: Hyperparams) -> Tuple[bool, str, Optional[TrainingRun]]:
        try:
            run = train(split, hp)
            self.checkpoint_repo.save(run.checkpoint)
            self.report_repo.write_jsonl(TRAIN_LOG_NAME, run.history)

            summary = run.checkpoint.training
            AuditLogger.log_action(
                action="checkpoint_written",
                resource=str(self.store.root),
                details={"epochs_run": summary.epochs_run, "best_epoch": summary.best_epoch},
            )
            return True, "Entrenamiento completado exitosamente", run

        except LagclError as e:
            return False, str(e), None
        except Exception as e:
            return False, f"Error entrenando modelo: {str(e)}", None

    @staticmethod
    def load_checkpoint(ckpt_dir, expected: Optional[Hyperparams] = None) -> Tuple[bool, str, Optional[Checkpoint]]:
        try:
            return True, "Checkpoint cargado", CheckpointRepository.at(ckpt_dir).load(expected)
        except LagclError as e:
            return False, f"--ckpt: {e}", None
        except Exception as e:
            return False, f"Error cargando checkpoint: {str(e)}", None

    @staticmethod
    def check_gradients(
        split: SplitDataset,
        hp: Hyperparams,
        selectors: Tuple[str, ...] = GRADIENT_SELECTORS,
        h_step: float = 1e-5,
    ) -> Tuple[bool, str, Optional[dict]]:
        try:
            results = {name: gradient_check_instance(split, hp, name, h_step) for name in selectors}
            worst = max(r.max_relative_error for r in results.values())
            logger.info("gradient_check", worst_relative_error=worst, selectors=list(selectors))
            return True, f"Error relativo máximo {worst:.3e}", results
        except LagclError as e:
            return False, str(e), None
        except Exception as e:
            return False, f"Error verificando gradientes: {str(e)}", None


