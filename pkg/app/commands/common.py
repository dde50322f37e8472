"""
Utilidades compartidas por los comandos: manifiesto de ejecución, errores y listas de flags
"""
import sys
import time
from datetime import datetime, timezone
from pathlib import Path
from typing import Any, Dict, List, Optional, Sequence, Union

import click

from app.config.settings import settings
from app.repositories import ReportRepository
from app.schemas.reports import RunManifest
from app.utils.audit import AuditLogger
from app.utils.storage import ArtifactStore

RUN_MANIFEST_NAME = "run_manifest.json"


def fail(message: str):
    click.echo(f"Error: {message}", err=True)
    sys.exit(1)


def split_list(cast):
    """Callback de click para valores separados por comas"""

    def parse(ctx, param, value):
        if value is None:
            return None
        try:
            return [cast(part.strip()) for part in value.split(",") if part.strip()]
        except ValueError:
            raise click.BadParameter(f"lista inválida: {value}", param=param)

    return parse


class RunContext:
    """Registra artefactos y tiempos de un comando; escribe el manifiesto al final"""

    def __init__(self, command: str, out: Union[str, Path]):
        self.command = command
        self.store = ArtifactStore(out)
        self.started_at = datetime.now(timezone.utc).isoformat()
        self._t0 = time.perf_counter()

    def finish(
        self,
        config: Optional[Dict[str, Any]] = None,
        seed: Optional[int] = None,
        dataset_fingerprint: Optional[str] = None,
        epoch_wall_times: Sequence[float] = (),
    ) -> RunManifest:
        artifacts: List[str] = self.store.artifacts()
        if RUN_MANIFEST_NAME not in artifacts:
            artifacts.append(RUN_MANIFEST_NAME)
        manifest = RunManifest(
            command=self.command,
            app_version=settings.APP_VERSION,
            config=config or {},
            seed=seed,
            dataset_fingerprint=dataset_fingerprint,
            artifacts=artifacts,
            started_at=self.started_at,
            wall_clock_seconds=time.perf_counter() - self._t0,
            epoch_wall_times=list(epoch_wall_times),
        )
        ReportRepository(self.store).write_json(RUN_MANIFEST_NAME, manifest)
        AuditLogger.log_action(
            action="run_finished",
            resource=str(self.store.root),
            details={"command": self.command, "artifacts": len(artifacts)},
        )
        return manifest
