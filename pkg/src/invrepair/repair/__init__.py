from .localize import FLOOR, SuspiciousnessRanking, localize
from .mutation import (IllFormedResult, InvalidOperand, Mutation, apply_all,
                       apply_mutation)
from .search import (Fitness, Patch, RepairFailed, SearchConfig, SearchConfigError,
                     contradictory, evaluate, search)

__all__ = [
    "FLOOR", "SuspiciousnessRanking", "localize", "IllFormedResult", "InvalidOperand",
    "Mutation", "apply_all", "apply_mutation", "Fitness", "Patch", "RepairFailed",
    "SearchConfig", "SearchConfigError", "contradictory", "evaluate", "search",
]
