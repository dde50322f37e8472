from .hyperparams import load_hyperparams
from .settings import settings

__all__ = ["settings", "load_hyperparams"]
