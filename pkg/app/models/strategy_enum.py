import enum


class KTScope(str, enum.Enum):
    TAIL_ONLY = "tail_only"
    ALL_NODES = "all_nodes"


class AugmentSides(str, enum.Enum):
    USERS = "users"
    ITEMS = "items"
    BOTH = "both"


class CLDenominator(str, enum.Enum):
    BATCH = "batch"
    ALL = "all"
