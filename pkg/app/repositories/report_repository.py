import json
from pathlib import Path
from typing import Iterable, List, Sequence, Union

import pandas as pd
from pydantic import BaseModel

from app.utils.storage import ArtifactStore


def _plain(payload):
    if isinstance(payload, BaseModel):
        return payload.model_dump(mode="json")
    return payload


class ReportRepository:
    """Reportes deterministas: claves ordenadas, sin marcas de tiempo"""

    def __init__(self, store: ArtifactStore):
        self.store = store

    def write_json(self, name: str, payload: Union[BaseModel, dict, list]) -> Path:
        return self.store.write_text(name, json.dumps(_plain(payload), sort_keys=True, indent=2) + "\n")

    def write_jsonl(self, name: str, records: Iterable[Union[BaseModel, dict]]) -> Path:
        lines = [json.dumps(_plain(record), sort_keys=True) for record in records]
        return self.store.write_text(name, "".join(line + "\n" for line in lines))

    def write_csv(self, name: str, columns: Sequence[str], rows: List[Sequence]) -> Path:
        frame = pd.DataFrame(list(rows), columns=list(columns))
        return self.store.write_text(name, frame.to_csv(index=False, lineterminator="\n"))
