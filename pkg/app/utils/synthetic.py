"""
Generador sintético de cola larga con comunidades latentes
"""
import numpy as np
import structlog

from app.models.dataset_model import InteractionDataset
from app.schemas.dataset import SyntheticConfig
from app.utils.exceptions import DatasetError

logger = structlog.get_logger(__name__)


def _rank_degrees(cfg: SyntheticConfig, cap: int) -> np.ndarray:
    """Grados por rango ∝ r^(−1/(a−1)), truncados a [1, cap], escalados hacia edges_target"""
    slope = 1.0 / (cfg.power_exponent - 1.0)
    base = np.arange(1, cfg.num_users + 1, dtype=np.float64) ** -slope

    def degrees_for(scale: float) -> np.ndarray:
        return np.clip(np.floor(scale * base + 0.5), 1, cap).astype(np.int64)

    lo, hi = 0.0, cap / base[-1]
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if degrees_for(mid).sum() < cfg.edges_target:
            lo = mid
        else:
            hi = mid
    return degrees_for(hi)


def _block_distributions(cfg: SyntheticConfig, item_block: np.ndarray, item_weight: np.ndarray) -> np.ndarray:
    dists = np.zeros((cfg.num_blocks, cfg.num_items))
    for b in range(cfg.num_blocks):
        inside = item_block == b
        w_in = item_weight * inside
        w_out = item_weight * ~inside
        p = np.zeros(cfg.num_items)
        if w_in.sum() > 0:
            p += cfg.intra_block_prob * w_in / w_in.sum()
        if w_out.sum() > 0:
            p += (1.0 - cfg.intra_block_prob if w_in.sum() > 0 else 1.0) * w_out / w_out.sum()
        dists[b] = p / p.sum()
    return dists


def generate_synthetic(cfg: SyntheticConfig) -> InteractionDataset:
    if cfg.edges_target > cfg.num_users * cfg.num_items:
        raise DatasetError(
            f"edges_target={cfg.edges_target} supera num_users × num_items = {cfg.num_users * cfg.num_items}"
        )
    if cfg.edges_target < cfg.num_users:
        logger.warning("synthetic_target_below_users", edges_target=cfg.edges_target, num_users=cfg.num_users)

    rng = np.random.default_rng(cfg.seed)
    cap = max(1, min(cfg.num_items, int(cfg.max_degree_fraction * cfg.num_items)))
    by_rank = _rank_degrees(cfg, cap)
    degrees = np.empty(cfg.num_users, dtype=np.int64)
    degrees[rng.permutation(cfg.num_users)] = by_rank

    user_block = rng.integers(0, cfg.num_blocks, size=cfg.num_users)
    item_block = rng.integers(0, cfg.num_blocks, size=cfg.num_items)
    slope = 1.0 / (cfg.power_exponent - 1.0)
    item_weight = (rng.permutation(cfg.num_items) + 1.0) ** -slope
    dists = _block_distributions(cfg, item_block, item_weight)

    adjacency = [set() for _ in range(cfg.num_users)]
    for u in range(cfg.num_users):
        p = dists[user_block[u]]
        size = min(int(degrees[u]), int((p > 0).sum()))
        adjacency[u].update(rng.choice(cfg.num_items, size=size, replace=False, p=p).tolist())

    covered = np.zeros(cfg.num_items, dtype=bool)
    for items in adjacency:
        covered[list(items)] = True
    for i in np.flatnonzero(~covered):
        same = np.flatnonzero(user_block == item_block[i])
        pool = same if len(same) else np.arange(cfg.num_users)
        adjacency[int(rng.choice(pool))].add(int(i))

    edges = np.array(
        [(u, i) for u in range(cfg.num_users) for i in sorted(adjacency[u])],
        dtype=np.int64,
    ).reshape(-1, 2)

    logger.info(
        "synthetic_generated",
        users=cfg.num_users,
        items=cfg.num_items,
        edges=int(len(edges)),
        exponent=cfg.power_exponent,
        blocks=cfg.num_blocks,
    )
    return InteractionDataset(
        num_users=cfg.num_users,
        num_items=cfg.num_items,
        edges=edges,
        user_ids=[f"u{u}" for u in range(cfg.num_users)],
        item_ids=[f"i{i}" for i in range(cfg.num_items)],
    )
