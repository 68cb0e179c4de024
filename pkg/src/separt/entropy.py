"""Two-level encoding trees and their structural entropy (in bits).

Every non-root node ``a`` of the tree contributes

    -(cut(a) / vol(root)) * log2(vol(a) / vol(parent(a)))

and the tree's entropy is the sum of those terms.  Terms whose volume is zero
are taken as zero.
"""

from __future__ import annotations

import math
from collections.abc import Iterable, Sequence
from dataclasses import dataclass

from separt.graph import WeightedGraph


class PartitionError(ValueError):
    """Clusters do not form a partition of the vertex set."""


@dataclass(frozen=True)
class TwoLevelTree:
    """Root -> cluster nodes -> one leaf per vertex.

    Clusters are stored as sorted tuples, ordered by their smallest member.
    """

    clusters: tuple[tuple[int, ...], ...]

    @classmethod
    def from_clusters(cls, clusters: Iterable[Iterable[int]], n: int | None = None) -> "TwoLevelTree":
        normed = []
        seen: set[int] = set()
        for c in clusters:
            members = tuple(sorted(c))
            if not members:
                raise PartitionError("empty cluster")
            if len(set(members)) != len(members) or seen.intersection(members):
                raise PartitionError(f"overlapping clusters at {members}")
            seen.update(members)
            normed.append(members)
        if n is not None and seen != set(range(n)):
            missing = sorted(set(range(n)) - seen)
            extra = sorted(seen - set(range(n)))
            raise PartitionError(f"clusters do not cover 0..{n - 1} (missing {missing}, unknown {extra})")
        normed.sort()
        return cls(tuple(normed))

    @classmethod
    def singletons(cls, n: int) -> "TwoLevelTree":
        return cls(tuple((v,) for v in range(n)))

    @classmethod
    def from_labels(cls, labels: Sequence[object]) -> "TwoLevelTree":
        groups: dict[object, list[int]] = {}
        for v, lab in enumerate(labels):
            groups.setdefault(lab, []).append(v)
        return cls.from_clusters(groups.values(), len(labels))

    @property
    def n(self) -> int:
        return sum(len(c) for c in self.clusters)

    def labels(self) -> list[int]:
        out = [0] * self.n
        for i, c in enumerate(self.clusters):
            for v in c:
                out[v] = i
        return out

    def nodes(self) -> list["TreeNode"]:
        """All non-root nodes: cluster nodes first, then leaves."""
        return [TreeNode("cluster", i) for i in range(len(self.clusters))] + [
            TreeNode("leaf", v) for v in range(self.n)
        ]

    def as_lists(self) -> list[list[int]]:
        return [list(c) for c in self.clusters]


@dataclass(frozen=True)
class TreeNode:
    """A node of a :class:`TwoLevelTree`.

    ``kind`` is ``"root"``, ``"cluster"`` (``index`` is the cluster position)
    or ``"leaf"`` (``index`` is the vertex).
    """

    kind: str
    index: int = 0


ROOT = TreeNode("root")


def xlog2(a: float, ratio: float) -> float:
    """``a * log2(ratio)`` with the ``0 * log 0 = 0`` convention."""
    if a == 0.0 or ratio <= 0.0:
        return 0.0
    return a * math.log2(ratio)


def _check_tree(g: WeightedGraph, t: TwoLevelTree) -> None:
    covered = [v for c in t.clusters for v in c]
    if len(covered) != g.n or set(covered) != set(range(g.n)):
        raise PartitionError(f"tree does not partition the {g.n} graph vertices")


def node_contribution(g: WeightedGraph, t: TwoLevelTree, node: TreeNode) -> float:
    _check_tree(g, t)
    vol_root = g.total_volume()
    if node.kind == "root":
        raise ValueError("the root has no entropy term")
    if vol_root == 0.0:
        return 0.0
    if node.kind == "cluster":
        members = t.clusters[node.index]
        vol = g.volume(members)
        return -xlog2(g.cut(members) / vol_root, vol / vol_root)
    if node.kind == "leaf":
        v = node.index
        parent = next(c for c in t.clusters if v in c)
        parent_vol = g.volume(parent)
        if parent_vol == 0.0:
            return 0.0
        return -xlog2(g.cut([v]) / vol_root, g.degree(v) / parent_vol)
    raise ValueError(f"unknown node kind {node.kind!r}")


def structural_entropy(g: WeightedGraph, t: TwoLevelTree) -> float:
    """Entropy of ``g`` under the two-level tree ``t``, computed from scratch."""
    _check_tree(g, t)
    vol_root = g.total_volume()
    if vol_root == 0.0:
        return 0.0
    total = 0.0
    for members in t.clusters:
        vol = g.volume(members)
        if vol == 0.0:
            continue
        total -= xlog2(g.cut(members) / vol_root, vol / vol_root)
        for v in members:
            total -= xlog2(g.cut([v]) / vol_root, g.degree(v) / vol)
    return total


def one_dim_entropy(g: WeightedGraph) -> float:
    """Entropy of the height-1 tree, where every vertex hangs off the root.

    Self-loops are excluded from the leaf cuts, so on a loop-free graph this
    is the Shannon entropy of the degree distribution.
    """
    vol_root = g.total_volume()
    if vol_root == 0.0:
        return 0.0
    total = 0.0
    for v in range(g.n):
        total -= xlog2(g.cut([v]) / vol_root, g.degree(v) / vol_root)
    return total
