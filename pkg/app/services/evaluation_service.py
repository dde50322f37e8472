"""
Servicio de evaluación y análisis de checkpoints
"""
from typing import Dict, Optional, Tuple

import numpy as np

from app.models.checkpoint_model import Checkpoint
from app.models.dataset_model import SplitDataset
from app.models.strategy_enum import AugmentSides
from app.repositories import ReportRepository
from app.schemas.reports import GroupReport, MetricsReport, UniformityReport
from app.utils.audit import AuditLogger
from app.utils.exceptions import CheckpointError, EvaluationError, LagclError
from app.utils.metrics import degree_group_report, metrics, tail_recall, uniformity_report
from app.utils.storage import ArtifactStore

DEFAULT_GROUPS = 10
DEFAULT_SAMPLE_PAIRS = 100_000


def check_compatible(split: SplitDataset, ckpt: Checkpoint):
    if ckpt.num_users != split.num_users or ckpt.num_items != split.num_items:
        raise CheckpointError(
            f"el checkpoint es de {ckpt.num_users}x{ckpt.num_items}, el dataset de {split.num_users}x{split.num_items}"
        )


def evaluate_test_split(split: SplitDataset, embeddings: np.ndarray, k: int, batch_users: int = 1024) -> MetricsReport:
    """Métricas de test con el recall medio de los tres deciles de menor grado"""
    if k > split.num_items:
        raise EvaluationError(f"--k: K={k} supera el número de ítems ({split.num_items})")
    report = metrics(split, embeddings, k=k, phase="test", batch_users=batch_users)
    if report.evaluated_users >= DEFAULT_GROUPS:
        report.tail_recall = tail_recall(report, split.train_degrees(), groups=DEFAULT_GROUPS)
    return report


def side_embeddings(ckpt: Checkpoint, side: AugmentSides) -> Dict[str, np.ndarray]:
    if side == AugmentSides.USERS:
        return {"users": ckpt.user_embeddings}
    if side == AugmentSides.ITEMS:
        return {"items": ckpt.item_embeddings}
    return {"users": ckpt.user_embeddings, "items": ckpt.item_embeddings}


class EvaluationService:

    def __init__(self, store: ArtifactStore):
        self.store = store
        self.report_repo = ReportRepository(store)

    def evaluate(self, split: SplitDataset, ckpt: Checkpoint, k: int = 20) -> Tuple[bool, str, Optional[MetricsReport]]:
        try:
            if k < 1:
                return False, "--k: debe ser >= 1", None
            check_compatible(split, ckpt)
            report = evaluate_test_split(split, ckpt.final_embeddings, k, ckpt.hyperparams.eval_batch_users)
            self.report_repo.write_json("metrics.json", report)

            AuditLogger.log_action(
                action="evaluation_written",
                resource=str(self.store.root),
                details={"k": k, "recall": report.recall, "ndcg": report.ndcg},
            )
            return True, f"Recall@{k}={report.recall:.4f} NDCG@{k}={report.ndcg:.4f}", report

        except LagclError as e:
            return False, str(e), None
        except Exception as e:
            return False, f"Error evaluando checkpoint: {str(e)}", None

    def degree_groups(
        self, split: SplitDataset, ckpt: Checkpoint, k: int = 20, groups: int = DEFAULT_GROUPS
    ) -> Tuple[bool, str, Optional[GroupReport]]:
        try:
            check_compatible(split, ckpt)
            if k > split.num_items:
                return False, f"--k: K={k} supera el número de ítems ({split.num_items})", None
            report = degree_group_report(split, ckpt.final_embeddings, groups=groups, k=k)
            self.report_repo.write_json("groups.json", report)
            self.report_repo.write_csv(
                "groups.csv",
                ("group", "users", "recall", "ndcg"),
                [(row.group, row.users, row.recall, row.ndcg) for row in report.groups],
            )
            return True, f"{len(report.groups)} grupos por grado", report

        except LagclError as e:
            return False, str(e), None
        except Exception as e:
            return False, f"Error analizando grupos por grado: {str(e)}", None

    def uniformity(
        self,
        ckpt: Checkpoint,
        side: AugmentSides = AugmentSides.BOTH,
        sample_pairs: int = DEFAULT_SAMPLE_PAIRS,
        seed: int = 0,
    ) -> Tuple[bool, str, Optional[Dict[str, UniformityReport]]]:
        try:
            reports = {}
            for name, table in side_embeddings(ckpt, side).items():
                report = uniformity_report(table, sample_pairs=sample_pairs, seed=seed, side=name)
                self.report_repo.write_json(f"uniformity_{name}.json", report)
                self.report_repo.write_csv(
                    f"uniformity_{name}.csv",
                    ("angle_bin", "count"),
                    list(enumerate(report.histogram)),
                )
                reports[name] = report
            summary = ", ".join(f"{name}={r.statistic:.4f}" for name, r in reports.items())
            return True, f"Uniformidad {summary}", reports

        except LagclError as e:
            return False, str(e), None
        except Exception as e:
            return False, f"Error calculando uniformidad: {str(e)}", None
