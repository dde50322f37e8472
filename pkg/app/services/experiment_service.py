"""
Servicio de ablaciones: variantes, barrido del umbral k y semillas
"""
from typing import List, Optional, Sequence, Tuple

import structlog

from app.models.dataset_model import SplitDataset
from app.models.variant_enum import Variant
from app.repositories import ReportRepository
from app.schemas.reports import AblationRow
from app.schemas.training import Hyperparams
from app.services.evaluation_service import evaluate_test_split
from app.services.training_service import train
from app.utils.audit import AuditLogger
from app.utils.exceptions import LagclError
from app.utils.metrics import uniformity_report
from app.utils.storage import ArtifactStore

logger = structlog.get_logger(__name__)

ABLATION_COLUMNS = ("variant", "k", "seed", "recall", "ndcg", "tail_recall", "uniformity")
UNIFORMITY_PAIRS = 100_000


def variant_hyperparams(base: Hyperparams, variant: Variant, k: Optional[int] = None, seed: Optional[int] = None) -> Hyperparams:
    update = variant.overrides()
    if k is not None:
        update["degree_threshold"] = k
    if seed is not None:
        update["seed"] = seed
    return base.model_copy(update=update)


def run_variant(split: SplitDataset, hp: Hyperparams, variant: Variant) -> AblationRow:
    run = train(split, hp)
    ckpt = run.checkpoint
    eval_k = min(hp.eval_k, split.num_items)
    report = evaluate_test_split(split, ckpt.final_embeddings, eval_k, hp.eval_batch_users)
    uniformity = uniformity_report(ckpt.user_embeddings, sample_pairs=UNIFORMITY_PAIRS, seed=hp.seed, side="users")
    row = AblationRow(
        variant=variant.value,
        k=hp.degree_threshold,
        seed=hp.seed,
        recall=report.recall,
        ndcg=report.ndcg,
        tail_recall=report.tail_recall,
        uniformity=uniformity.statistic,
    )
    logger.info("ablation_row", **row.model_dump(mode="json"))
    return row


class ExperimentService:

    def __init__(self, store: ArtifactStore):
        self.store = store
        self.report_repo = ReportRepository(store)

    def ablate(
        self,
        split: SplitDataset,
        base: Hyperparams,
        variants: Sequence[Variant],
        k_sweep: Optional[Sequence[int]] = None,
        seeds: Optional[Sequence[int]] = None,
    ) -> Tuple[bool, str, Optional[List[AblationRow]]]:
        try:
            rows: List[AblationRow] = []
            for variant in variants:
                for k in (k_sweep or [base.degree_threshold]):
                    for seed in (seeds or [base.seed]):
                        rows.append(run_variant(split, variant_hyperparams(base, variant, k, seed), variant))

            self.report_repo.write_csv(
                "ablation.csv",
                ABLATION_COLUMNS,
                [tuple(getattr(row, col) for col in ABLATION_COLUMNS) for row in rows],
            )
            self.report_repo.write_json("ablation.json", [row.model_dump(mode="json") for row in rows])

            AuditLogger.log_action(
                action="ablation_written",
                resource=str(self.store.root),
                details={"rows": len(rows), "variants": [v.value for v in variants]},
            )
            return True, f"Tabla de ablación con {len(rows)} filas", rows

        except LagclError as e:
            return False, str(e), None
        except Exception as e:
            return False, f"Error ejecutando ablación: {str(e)}", None
