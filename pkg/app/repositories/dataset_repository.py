"""
Repositorio para datasets particionados en disco
"""
import json
from pathlib import Path
from typing import List, Union

import numpy as np
from pydantic import ValidationError

from app.models.dataset_model import InteractionDataset, SplitDataset
from app.schemas.dataset import DatasetManifest
from app.utils.exceptions import DatasetError
from app.utils.storage import ArtifactStore

MANIFEST_NAME = "dataset.json"
SPLIT_NAMES = ("train", "val", "test")
FORMAT_VERSION = 1


def _bin_name(split: str) -> str:
    return f"{split}.bin"


class DatasetRepository:

    def __init__(self, store: ArtifactStore):
        self.store = store

    @staticmethod
    def file_names() -> List[str]:
        return [MANIFEST_NAME] + [_bin_name(s) for s in SPLIT_NAMES]

    def save_split(self, split: SplitDataset) -> Path:
        self.store.ensure()
        for name in SPLIT_NAMES:
            edges = getattr(split, name)
            self.store.write_bytes(_bin_name(name), np.ascontiguousarray(edges, dtype="<u4").tobytes())

        manifest = DatasetManifest(
            format_version=FORMAT_VERSION,
            num_users=split.num_users,
            num_items=split.num_items,
            user_ids=split.user_ids,
            item_ids=split.item_ids,
            split_sizes=split.split_sizes(),
            ratios=list(split.ratios),
            seed=split.seed,
            min_rating=split.min_rating,
            source=split.source,
        )
        return self.store.write_text(
            MANIFEST_NAME, json.dumps(manifest.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"
        )

    def save_interactions(self, ds: InteractionDataset, name: str = "interactions.tsv") -> Path:
        """Log crudo separado por tabuladores, reutilizable por `prepare`"""
        lines = ["user\titem"]
        lines.extend(f"{ds.user_ids[u]}\t{ds.item_ids[i]}" for u, i in ds.edges.tolist())
        return self.store.write_text(name, "\n".join(lines) + "\n")

    def load_split(self) -> SplitDataset:
        root = self.store.root
        manifest_path = root / MANIFEST_NAME
        if not manifest_path.is_file():
            raise DatasetError(f"falta {MANIFEST_NAME} en {root}")
        try:
            manifest = DatasetManifest(**json.loads(manifest_path.read_text(encoding="utf-8")))
        except (json.JSONDecodeError, ValidationError) as e:
            raise DatasetError(f"manifiesto de dataset inválido: {e}")
        if manifest.format_version != FORMAT_VERSION:
            raise DatasetError(f"versión de formato {manifest.format_version} no soportada")
        if len(manifest.user_ids) != manifest.num_users or len(manifest.item_ids) != manifest.num_items:
            raise DatasetError("los mapas de ids no coinciden con los conteos del manifiesto")

        parts = {}
        for name in SPLIT_NAMES:
            path = root / _bin_name(name)
            if not path.is_file():
                raise DatasetError(f"falta {path.name} en {root}")
            raw = path.read_bytes()
            expected = manifest.split_sizes.get(name, 0) * 2 * 4
            if len(raw) != expected:
                raise DatasetError(f"{path.name}: se esperaban {expected} bytes, hay {len(raw)}")
            edges = np.frombuffer(raw, dtype="<u4").reshape(-1, 2).astype(np.int64)
            if len(edges) and (edges[:, 0].max() >= manifest.num_users or edges[:, 1].max() >= manifest.num_items):
                raise DatasetError(f"{path.name}: índice fuera de rango")
            parts[name] = edges

        return SplitDataset(
            num_users=manifest.num_users,
            num_items=manifest.num_items,
            train=parts["train"],
            val=parts["val"],
            test=parts["test"],
            user_ids=manifest.user_ids,
            item_ids=manifest.item_ids,
            seed=manifest.seed,
            ratios=tuple(manifest.ratios),
            min_rating=manifest.min_rating,
            source=manifest.source,
        )

    @classmethod
    def at(cls, directory: Union[str, Path]) -> "DatasetRepository":
        return cls(ArtifactStore(directory))
