"""
Huella de contenido para datasets y artefactos
"""
import hashlib
from pathlib import Path
from typing import Iterable, Tuple, Union

CHUNK_SIZE = 1 << 20


def fingerprint_files(files: Iterable[Tuple[str, Union[str, Path]]]) -> str:
    """sha256 sobre pares (nombre, contenido) ordenados por nombre"""
    digest = hashlib.sha256()
    for name, path in sorted(files, key=lambda pair: pair[0]):
        digest.update(name.encode("utf-8"))
        digest.update(b"\0")
        with open(path, "rb") as f:
            for chunk in iter(lambda: f.read(CHUNK_SIZE), b""):
                digest.update(chunk)
        digest.update(b"\0")
    return digest.hexdigest()


def fingerprint_directory(directory: Union[str, Path], names: Iterable[str]) -> str:
    directory = Path(directory)
    return fingerprint_files((name, directory / name) for name in names)
