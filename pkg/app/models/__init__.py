from .dataset_model import InteractionDataset, SplitDataset
from .strategy_enum import AugmentSides, CLDenominator, KTScope
from .variant_enum import Variant

__all__ = [
    "InteractionDataset",
    "SplitDataset",
    "AugmentSides",
    "CLDenominator",
    "KTScope",
    "Variant",
]
