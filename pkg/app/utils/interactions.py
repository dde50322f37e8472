"""
Ingesta de logs de interacción y partición train/val/test
"""
import math
from pathlib import Path
from typing import Sequence

import numpy as np
import pandas as pd
import structlog

from app.models.dataset_model import InteractionDataset, SplitDataset
from app.utils.exceptions import DatasetError

logger = structlog.get_logger(__name__)

HEADER_TOKENS = {"user", "item", "rating", "timestamp", "userid", "itemid", "user_id", "item_id", "movieid", "business_id"}


def _detect_format(path: Path):
    try:
        with open(path, "r", encoding="utf-8") as f:
            first = f.readline()
    except (OSError, UnicodeDecodeError) as e:
        raise DatasetError(f"no se pudo leer {path}: {e}")
    sep = "\t" if "\t" in first else ","
    fields = [x.strip().lower() for x in first.rstrip("\r\n").split(sep)]
    has_header = any(x in HEADER_TOKENS for x in fields)
    return sep, has_header


def load_interactions(path, min_rating: float = 0.0) -> InteractionDataset:
    path = Path(path)
    if not path.is_file():
        raise DatasetError(f"archivo no encontrado: {path}")
    sep, has_header = _detect_format(path)
    offset = 2 if has_header else 1

    try:
        frame = pd.read_csv(
            path,
            sep=sep,
            header=None,
            skiprows=1 if has_header else 0,
            dtype=str,
            keep_default_na=False,
            skip_blank_lines=True,
            encoding="utf-8",
        )
    except pd.errors.EmptyDataError:
        raise DatasetError(f"archivo vacío: {path}")
    except pd.errors.ParserError as e:
        raise DatasetError(f"fila mal formada: {e}")
    except (OSError, UnicodeDecodeError) as e:
        raise DatasetError(f"no se pudo leer {path}: {e}")

    if frame.shape[1] < 2 or frame.shape[1] > 4:
        raise DatasetError(f"se esperaban 2 a 4 columnas, hay {frame.shape[1]}", line=offset)

    users = frame[0].str.strip()
    items = frame[1].str.strip()
    missing = (users == "") | (items == "")
    if missing.any():
        raise DatasetError("id de usuario o ítem vacío", line=int(np.flatnonzero(missing.to_numpy())[0]) + offset)

    if frame.shape[1] >= 3:
        ratings = pd.to_numeric(frame[2].str.strip(), errors="coerce")
        bad = ~np.isfinite(ratings.to_numpy(dtype=np.float64))
        if bad.any():
            raise DatasetError("valoración no numérica o no finita", line=int(np.flatnonzero(bad)[0]) + offset)
    else:
        ratings = pd.Series(np.ones(len(frame)))

    if frame.shape[1] == 4:
        raw = frame[3].str.strip()
        stamps = pd.to_numeric(raw, errors="coerce").to_numpy(dtype=np.float64)
        whole = np.isfinite(stamps) & (stamps == np.floor(stamps))
        bad = (raw != "").to_numpy() & ~whole
        if bad.any():
            raise DatasetError("timestamp no entero", line=int(np.flatnonzero(bad)[0]) + offset)

    keep = (ratings >= min_rating).to_numpy()
    kept = pd.DataFrame({"user": users[keep], "item": items[keep]}).drop_duplicates(keep="first")
    if kept.empty:
        raise DatasetError("no quedan interacciones tras el filtro de valoración")

    user_codes, user_ids = pd.factorize(kept["user"], sort=False)
    item_codes, item_ids = pd.factorize(kept["item"], sort=False)
    edges = np.stack([user_codes, item_codes], axis=1).astype(np.int64)

    logger.info(
        "interactions_loaded",
        path=str(path),
        rows=int(len(frame)),
        kept=int(len(edges)),
        users=int(len(user_ids)),
        items=int(len(item_ids)),
    )
    return InteractionDataset(
        num_users=len(user_ids),
        num_items=len(item_ids),
        edges=edges,
        user_ids=[str(x) for x in user_ids],
        item_ids=[str(x) for x in item_ids],
    )


def _counts(n: int, ratios: Sequence[float]):
    n_val = int(math.floor(n * ratios[1] + 0.5))
    n_test = int(math.floor(n * ratios[2] + 0.5))
    # al menos una arista en train aunque el usuario tenga pocas interacciones
    while n - n_val - n_test < 1:
        if n_val > 0:
            n_val -= 1
        else:
            n_test -= 1
    return n - n_val - n_test, n_val, n_test


def split_dataset(ds: InteractionDataset, ratios: Sequence[float] = (0.7, 0.1, 0.2), seed: int = 0) -> SplitDataset:
    """Asignación aleatoria estratificada por usuario"""
    ratios = tuple(float(r) for r in ratios)
    if len(ratios) != 3 or any(r <= 0 for r in ratios) or abs(sum(ratios) - 1.0) > 1e-9:
        raise DatasetError(f"--split: proporciones inválidas {ratios}: deben ser 3 positivas que sumen 1")
    if ds.num_edges == 0:
        raise DatasetError("dataset vacío")

    rng = np.random.default_rng(seed)
    order = np.lexsort((ds.edges[:, 1], ds.edges[:, 0]))
    edges = ds.edges[order]
    bounds = np.searchsorted(edges[:, 0], np.arange(ds.num_users + 1))

    parts = {"train": [], "val": [], "test": []}
    for u in range(ds.num_users):
        user_edges = edges[bounds[u]:bounds[u + 1]]
        if len(user_edges) == 0:
            continue
        shuffled = user_edges[rng.permutation(len(user_edges))]
        n_train, n_val, _ = _counts(len(user_edges), ratios)
        parts["train"].append(shuffled[:n_train])
        parts["val"].append(shuffled[n_train:n_train + n_val])
        parts["test"].append(shuffled[n_train + n_val:])

    def stack(chunks):
        return np.concatenate(chunks, axis=0) if chunks else np.empty((0, 2), dtype=np.int64)

    train, val, test = stack(parts["train"]), stack(parts["val"]), stack(parts["test"])
    item_ids = list(ds.item_ids)

    # ítems sin aristas de entrenamiento: fuera del dataset, índices recompactados
    orphan = np.bincount(train[:, 1], minlength=ds.num_items) == 0
    if orphan.any():
        remap = np.cumsum(~orphan) - 1
        val = val[~orphan[val[:, 1]]]
        test = test[~orphan[test[:, 1]]]
        logger.warning(
            "items_without_training_edges_dropped",
            count=int(orphan.sum()),
            edges=int(ds.num_edges - len(train) - len(val) - len(test)),
        )
        for part in (train, val, test):
            part[:, 1] = remap[part[:, 1]]
        item_ids = [raw for raw, dropped in zip(item_ids, orphan) if not dropped]

    return SplitDataset(
        num_users=ds.num_users,
        num_items=len(item_ids),
        train=train,
        val=val,
        test=test,
        user_ids=list(ds.user_ids),
        item_ids=item_ids,
        seed=seed,
        ratios=ratios,
    )
