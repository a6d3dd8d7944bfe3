"""Topological analysis of sequences of partitions via the multiscale clustering bifiltration."""

from .core import (
    BigradeGrid,
    Partition,
    PartitionError,
    PartitionSequence,
    is_coarse_graining,
    is_hierarchical,
    is_nested,
    refines,
)
from .measures import (
    ConflictSummary,
    average_conflict0,
    average_conflict1,
    conflict_summary,
    hilbert_distance,
    hilbert_grid,
    hilbert_grids,
)

__version__ = "0.1.0"

__all__ = [
    "BigradeGrid",
    "ConflictSummary",
    "Partition",
    "PartitionError",
    "PartitionSequence",
    "average_conflict0",
    "average_conflict1",
    "conflict_summary",
    "hilbert_distance",
    "hilbert_grid",
    "hilbert_grids",
    "is_coarse_graining",
    "is_hierarchical",
    "is_nested",
    "refines",
]
