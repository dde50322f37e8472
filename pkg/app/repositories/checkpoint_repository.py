"""
Repositorio para checkpoints: manifiesto JSON + arreglos float32 little-endian
"""
import json
from collections import OrderedDict
from pathlib import Path
from typing import Optional, Union

import numpy as np
from pydantic import ValidationError

from app.models.checkpoint_model import Checkpoint
from app.schemas.training import ArraySpec, CheckpointManifest, Hyperparams
from app.utils.exceptions import CheckpointError
from app.utils.storage import ArtifactStore

MANIFEST_NAME = "checkpoint.json"
ARRAYS_NAME = "checkpoint.bin"
FORMAT_VERSION = 1
ITEM_SIZE = 4


class CheckpointRepository:

    def __init__(self, store: ArtifactStore):
        self.store = store

    def save(self, ckpt: Checkpoint) -> Path:
        self.store.ensure()
        specs = []
        chunks = []
        offset = 0
        for name, array in ckpt.arrays.items():
            data = np.ascontiguousarray(array, dtype="<f4").tobytes()
            specs.append(ArraySpec(name=name, shape=list(array.shape), offset=offset, nbytes=len(data)))
            chunks.append(data)
            offset += len(data)
        self.store.write_bytes(ARRAYS_NAME, b"".join(chunks))

        manifest = CheckpointManifest(
            format_version=FORMAT_VERSION,
            hyperparams=ckpt.hyperparams,
            num_users=ckpt.num_users,
            num_items=ckpt.num_items,
            arrays=specs,
            training=ckpt.training,
        )
        return self.store.write_text(
            MANIFEST_NAME, json.dumps(manifest.model_dump(mode="json"), sort_keys=True, indent=2) + "\n"
        )

    def load(self, expected: Optional[Hyperparams] = None) -> Checkpoint:
        root = self.store.root
        manifest_path = root / MANIFEST_NAME
        arrays_path = root / ARRAYS_NAME
        if not manifest_path.is_file() or not arrays_path.is_file():
            raise CheckpointError(f"checkpoint incompleto en {root}")
        try:
            manifest = CheckpointManifest(**json.loads(manifest_path.read_text(encoding="utf-8")))
        except (json.JSONDecodeError, ValidationError) as e:
            raise CheckpointError(f"manifiesto de checkpoint corrupto: {e}")
        if manifest.format_version != FORMAT_VERSION:
            raise CheckpointError(f"versión de checkpoint {manifest.format_version} no soportada")

        if expected is not None:
            for key in ("embedding_dim", "layers"):
                stored, wanted = getattr(manifest.hyperparams, key), getattr(expected, key)
                if stored != wanted:
                    raise CheckpointError(f"{key}: el checkpoint usa {stored}, la configuración pide {wanted}")

        raw = arrays_path.read_bytes()
        declared = sum(spec.nbytes for spec in manifest.arrays)
        if len(raw) != declared:
            raise CheckpointError(f"tamaño incorrecto: {ARRAYS_NAME} tiene {len(raw)} bytes, se declaran {declared}")

        arrays = OrderedDict()
        cursor = 0
        for spec in manifest.arrays:
            count = int(np.prod(spec.shape)) if spec.shape else 1
            if spec.offset != cursor or spec.nbytes != count * ITEM_SIZE:
                raise CheckpointError(f"tamaño incorrecto para el arreglo {spec.name}")
            arrays[spec.name] = np.frombuffer(raw, dtype="<f4", count=count, offset=spec.offset).reshape(spec.shape).copy()
            cursor += spec.nbytes

        return Checkpoint(
            hyperparams=manifest.hyperparams,
            num_users=manifest.num_users,
            num_items=manifest.num_items,
            arrays=arrays,
            training=manifest.training,
        )

    @classmethod
    def at(cls, directory: Union[str, Path]) -> "CheckpointRepository":
        return cls(ArtifactStore(directory))
