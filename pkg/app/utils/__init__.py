"""
Utilidades del motor
"""
from .audit import AppLogger, AuditLogger, setup_app_logging
from .storage import ArtifactStore, FileValidator

__all__ = [
    "AppLogger",
    "AuditLogger",
    "setup_app_logging",
    "ArtifactStore",
    "FileValidator"
]
