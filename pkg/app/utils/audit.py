import logging
import sys
from typing import Optional

import structlog

from app.config.settings import settings


class AuditLogger:

    @staticmethod
    def log_action(
        action: str,
        resource: Optional[str] = None,
        details: Optional[dict] = None,
    ):
        try:
            logger = structlog.get_logger("lagcl.audit")
            logger.info(action, resource=resource, **(details or {}))
        except Exception as e:
            logging.error(f"Error registrando auditoría: {e}")


class AppLogger:

    @staticmethod
    def setup_logging(level: Optional[str] = None, fmt: Optional[str] = None):
        level_name = (level or settings.LAGCL_LOG_LEVEL).upper()
        log_level = getattr(logging, level_name, logging.INFO)

        handlers = [logging.StreamHandler(sys.stderr)]
        if settings.LAGCL_LOG_FILE:
            handlers.append(logging.FileHandler(settings.LAGCL_LOG_FILE))

        logging.basicConfig(level=log_level, format="%(message)s", handlers=handlers, force=True)

        renderer = (
            structlog.dev.ConsoleRenderer()
            if (fmt or settings.LAGCL_LOG_FORMAT).lower() == "console"
            else structlog.processors.JSONRenderer(sort_keys=True)
        )
        structlog.configure(
            processors=[
                structlog.contextvars.merge_contextvars,
                structlog.stdlib.add_logger_name,
                structlog.processors.add_log_level,
                structlog.processors.TimeStamper(fmt="iso"),
                renderer,
            ],
            wrapper_class=structlog.make_filtering_bound_logger(log_level),
            logger_factory=structlog.stdlib.LoggerFactory(),
            cache_logger_on_first_use=False,
        )
        return structlog.get_logger("lagcl")


def setup_app_logging(level: Optional[str] = None, fmt: Optional[str] = None):
    return AppLogger.setup_logging(level, fmt)
