"""
Evaluación top-K por ranking completo, grupos por grado y uniformidad
"""
from typing import List, Optional, Sequence, Tuple

import numpy as np
import structlog
from scipy.special import logsumexp

from app.models.dataset_model import SplitDataset
from app.schemas.reports import GroupMetrics, GroupReport, MetricsReport, UniformityReport
from app.utils.exceptions import EvaluationError

logger = structlog.get_logger(__name__)

ANGLE_BINS = 64


def rank_items(scores: np.ndarray, exclusions: Optional[Sequence[int]], k: int) -> np.ndarray:
    """Top-K por puntaje descendente; empates por índice ascendente; excluidos omitidos"""
    if k < 1:
        raise EvaluationError("K debe ser >= 1")
    scores = np.asarray(scores, dtype=np.float64).copy()
    if exclusions is not None and len(exclusions):
        scores[np.asarray(exclusions, dtype=np.int64)] = -np.inf
    order = np.argsort(-scores, kind="stable")[:k]
    return order[np.isfinite(scores[order])]


def recall_ndcg(ranked: np.ndarray, relevant: np.ndarray, k: int) -> Tuple[float, float]:
    if len(relevant) == 0:
        raise EvaluationError("el usuario no tiene ítems relevantes")
    hits = np.isin(ranked[:k], relevant).astype(np.float64)
    discounts = 1.0 / np.log2(np.arange(2, len(hits) + 2))
    dcg = float((hits * discounts).sum())
    ideal = min(len(relevant), k)
    idcg = float((1.0 / np.log2(np.arange(2, ideal + 2))).sum())
    return float(hits.sum()) / len(relevant), dcg / idcg


def _exclusions(split: SplitDataset, phase: str) -> List[List[np.ndarray]]:
    if phase == "val":
        return [split.train_items_by_user()]
    return [split.train_items_by_user(), split.val_items_by_user()]


def metrics(
    split: SplitDataset,
    embeddings: np.ndarray,
    k: int = 20,
    phase: str = "test",
    batch_users: int = 1024,
) -> MetricsReport:
    if k < 1:
        raise EvaluationError("K debe ser >= 1")
    if k > split.num_items:
        raise EvaluationError(f"K={k} supera el número de ítems ({split.num_items})")
    targets = split.val_items_by_user() if phase == "val" else split.test_items_by_user()
    users = np.array([u for u in range(split.num_users) if len(targets[u])], dtype=np.int64)
    if len(users) == 0:
        raise EvaluationError(f"no hay usuarios evaluables en {phase}")

    embeddings = np.asarray(embeddings, dtype=np.float64)
    user_emb = embeddings[:split.num_users]
    item_emb = embeddings[split.num_users:split.num_users + split.num_items]
    excluded = _exclusions(split, phase)

    recalls = np.zeros(len(users))
    ndcgs = np.zeros(len(users))
    for start in range(0, len(users), batch_users):
        chunk = users[start:start + batch_users]
        scores = user_emb[chunk] @ item_emb.T
        for row, u in enumerate(chunk):
            for table in excluded:
                scores[row, table[u]] = -np.inf
        order = np.argsort(-scores, axis=1, kind="stable")[:, :k]
        for row, u in enumerate(chunk):
            ranked = order[row][np.isfinite(scores[row, order[row]])]
            recalls[start + row], ndcgs[start + row] = recall_ndcg(ranked, targets[u], k)

    return MetricsReport(
        k=k,
        recall=float(recalls.mean()),
        ndcg=float(ndcgs.mean()),
        evaluated_users=int(len(users)),
        users=users.tolist(),
        per_user_recall=recalls.tolist(),
        per_user_ndcg=ndcgs.tolist(),
    )


def _degree_groups(report: MetricsReport, degrees: np.ndarray, groups: int) -> List[np.ndarray]:
    users = np.asarray(report.users, dtype=np.int64)
    if len(users) < groups:
        raise EvaluationError(f"hay {len(users)} usuarios evaluables, se necesitan al menos {groups}")
    order = np.lexsort((users, degrees[users]))
    return np.array_split(order, groups)


def group_report_from(report: MetricsReport, degrees: np.ndarray, groups: int = 10) -> GroupReport:
    users = np.asarray(report.users, dtype=np.int64)
    recalls = np.asarray(report.per_user_recall)
    ndcgs = np.asarray(report.per_user_ndcg)
    rows = []
    for gid, positions in enumerate(_degree_groups(report, degrees, groups), start=1):
        rows.append(GroupMetrics(
            group=gid,
            users=int(len(positions)),
            mean_degree=float(degrees[users[positions]].mean()),
            recall=float(recalls[positions].mean()),
            ndcg=float(ndcgs[positions].mean()),
        ))
    return GroupReport(k=report.k, groups=rows)


def degree_group_report(split: SplitDataset, embeddings: np.ndarray, groups: int = 10, k: int = 20) -> GroupReport:
    report = metrics(split, embeddings, k=k, phase="test")
    return group_report_from(report, split.train_degrees(), groups)


def tail_recall(report: MetricsReport, degrees: np.ndarray, groups: int = 10, bottom: int = 3) -> float:
    """Recall medio de los `bottom` grupos de menor grado"""
    grouped = group_report_from(report, degrees, groups)
    return float(np.mean([row.recall for row in grouped.groups[:bottom]]))


def uniformity_report(
    embeddings: np.ndarray,
    sample_pairs: int = 100_000,
    seed: int = 0,
    side: str = "users",
    bins: int = ANGLE_BINS,
) -> UniformityReport:
    X = np.asarray(embeddings, dtype=np.float64)
    norms = np.linalg.norm(X, axis=1)
    nonzero = norms > 0
    if (~nonzero).any():
        logger.warning("uniformity_zero_rows_excluded", count=int((~nonzero).sum()), side=side)
    X = X[nonzero]
    m = X.shape[0]
    if m < 2:
        raise EvaluationError("se necesitan al menos 2 filas no nulas")

    unit = X / norms[nonzero][:, None]
    rng = np.random.default_rng(seed)
    first = rng.integers(0, m, size=sample_pairs)
    second = rng.integers(0, m - 1, size=sample_pairs)
    second[second >= first] += 1
    sq = ((unit[first] - unit[second]) ** 2).sum(axis=1)
    statistic = min(0.0, float(logsumexp(-2.0 * sq) - np.log(sample_pairs)))

    centered = X - X.mean(axis=0)
    _, _, vt = np.linalg.svd(centered, full_matrices=False)
    basis = vt[:2]
    projected = centered @ basis.T
    if projected.shape[1] < 2:
        projected = np.hstack([projected, np.zeros((m, 2 - projected.shape[1]))])
    radius = np.linalg.norm(projected, axis=1, keepdims=True)
    circle = np.where(radius > 0, projected / np.where(radius > 0, radius, 1.0), 0.0)
    angles = np.arctan2(circle[:, 1], circle[:, 0])
    angles = np.where(angles >= np.pi, angles - 2 * np.pi, angles)
    histogram, _ = np.histogram(angles, bins=np.linspace(-np.pi, np.pi, bins + 1))

    return UniformityReport(
        side=side,
        statistic=statistic,
        sample_pairs=sample_pairs,
        sample_count=int(m),
        bins=bins,
        histogram=histogram.astype(int).tolist(),
    )
