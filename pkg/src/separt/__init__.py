"""Dialogue partitioning by two-dimensional structural entropy minimisation."""

from separt.dialogue import Dialogue, attach_root, build_graph, thread_closure
from separt.dsem import DsemConfig, run_dsem
from separt.entropy import TwoLevelTree, one_dim_entropy, structural_entropy
from separt.graph import WeightedGraph
from separt.pipeline import PartitionReport, partition_dialogue

__all__ = [
    "Dialogue",
    "DsemConfig",
    "PartitionReport",
    "TwoLevelTree",
    "WeightedGraph",
    "attach_root",
    "build_graph",
    "one_dim_entropy",
    "partition_dialogue",
    "run_dsem",
    "structural_entropy",
    "thread_closure",
]
