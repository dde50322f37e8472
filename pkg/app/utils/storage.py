from pathlib import Path
from typing import List, Tuple, Union

import structlog

logger = structlog.get_logger(__name__)


class ArtifactStore:
    """Directorio de salida de un comando; registra cada archivo escrito"""

    def __init__(self, root: Union[str, Path]):
        self.root = Path(root)
        self._written: List[str] = []

    def ensure(self) -> Path:
        self.root.mkdir(parents=True, exist_ok=True)
        return self.root

    def path(self, name: str) -> Path:
        return self.root / name

    def _record(self, target: Path):
        rel = str(target.relative_to(self.root)) if target.is_relative_to(self.root) else str(target)
        if rel not in self._written:
            self._written.append(rel)
        logger.debug("artifact_written", path=str(target))

    def write_bytes(self, name: str, content: bytes) -> Path:
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        target.write_bytes(content)
        self._record(target)
        return target

    def write_text(self, name: str, content: str) -> Path:
        target = self.path(name)
        target.parent.mkdir(parents=True, exist_ok=True)
        with open(target, "w", encoding="utf-8", newline="\n") as f:
            f.write(content)
        self._record(target)
        return target

    def artifacts(self) -> List[str]:
        return list(self._written)


class FileValidator:

    MAX_INPUT_SIZE = 2 * 1024 * 1024 * 1024

    @classmethod
    def validate_input(cls, path: Union[str, Path], flag: str) -> Tuple[bool, str]:
        path = Path(path)
        if not path.exists():
            return False, f"{flag}: archivo no encontrado: {path}"
        if not path.is_file():
            return False, f"{flag}: no es un archivo: {path}"
        if path.stat().st_size == 0:
            return False, f"{flag}: archivo vacío: {path}"
        if path.stat().st_size > cls.MAX_INPUT_SIZE:
            return False, f"{flag}: archivo demasiado grande. Tamaño máximo: {cls.MAX_INPUT_SIZE // (1024 ** 3)}GB"
        return True, "Archivo válido"

    @classmethod
    def validate_directory(cls, path: Union[str, Path], flag: str, required: Tuple[str, ...] = ()) -> Tuple[bool, str]:
        path = Path(path)
        if not path.is_dir():
            return False, f"{flag}: directorio no encontrado: {path}"
        missing = [name for name in required if not (path / name).is_file()]
        if missing:
            return False, f"{flag}: faltan archivos en {path}: {', '.join(missing)}"
        return True, "Directorio válido"
