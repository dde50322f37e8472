"""
Lectura del archivo plano de hiperparámetros `clave = valor`
"""
from pathlib import Path
from typing import Dict, Optional, Union

from pydantic import ValidationError

from app.schemas.training import Hyperparams
from app.utils.exceptions import ConfigError


def parse_config_text(text: str) -> Dict[str, str]:
    entries: Dict[str, str] = {}
    for number, raw in enumerate(text.splitlines(), start=1):
        line = raw.split("#", 1)[0].strip()
        if not line:
            continue
        if "=" not in line:
            raise ConfigError(f"línea {number}", "se esperaba 'clave = valor'")
        key, value = (part.strip() for part in line.split("=", 1))
        if not key:
            raise ConfigError(f"línea {number}", "clave vacía")
        if key in entries:
            raise ConfigError(key, "clave duplicada")
        entries[key] = value
    return entries


def validate_hyperparams(entries: Dict[str, object]) -> Hyperparams:
    try:
        return Hyperparams(**entries)
    except ValidationError as e:
        first = e.errors()[0]
        key = ".".join(str(part) for part in first["loc"]) or "config"
        if first["type"] == "extra_forbidden":
            raise ConfigError(key, "clave desconocida")
        raise ConfigError(key, first["msg"])


def load_hyperparams(path: Optional[Union[str, Path]], overrides: Optional[Dict[str, object]] = None) -> Hyperparams:
    entries: Dict[str, object] = {}
    if path is not None:
        path = Path(path)
        if not path.is_file():
            raise ConfigError("--config", f"archivo no encontrado: {path}")
        entries.update(parse_config_text(path.read_text(encoding="utf-8")))
    entries.update(overrides or {})
    return validate_hyperparams(entries)


def dump_hyperparams(hp: Hyperparams) -> str:
    lines = []
    for key, value in hp.model_dump(mode="json").items():
        lines.append(f"{key} = {str(value).lower() if isinstance(value, bool) else value}")
    return "\n".join(lines) + "\n"
