"""
Comandos de línea de órdenes
"""
from .analysis import analyze, evaluate
from .data import prepare, synth
from .training import ablate, gradcheck, train

__all__ = [
    "prepare",
    "synth",
    "train",
    "gradcheck",
    "evaluate",
    "analyze",
    "ablate"
]
