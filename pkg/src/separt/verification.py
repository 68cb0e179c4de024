"""Exhaustive structural-entropy minimiser and planted synthetic dialogues."""

from __future__ import annotations

from collections.abc import Iterator
from dataclasses import dataclass

import numpy as np

from separt.dialogue import Dialogue
from separt.entropy import TwoLevelTree, xlog2
from separt.graph import WeightedGraph

MAX_ORACLE_N = 12


class SizeBoundError(ValueError):
    """Graph too large for exhaustive search."""


def restricted_growth_strings(n: int) -> Iterator[list[int]]:
    """Restricted growth strings of length ``n`` in lexicographic order."""
    if n == 0:
        return
    a = [0] * n
    peak = [0] * n  # peak[i] = max(a[:i+1])
    while True:
        yield list(a)
        i = n - 1
        while i > 0 and a[i] > peak[i - 1]:
            i -= 1
        if i == 0:
            return
        a[i] += 1
        peak[i] = max(peak[i - 1], a[i])
        for j in range(i + 1, n):
            a[j] = 0
            peak[j] = peak[i]


def enumerate_set_partitions(n: int) -> Iterator[TwoLevelTree]:
    if not 1 <= n <= MAX_ORACLE_N:
        raise SizeBoundError(f"n must lie in [1, {MAX_ORACLE_N}], got {n}")
    for rgs in restricted_growth_strings(n):
        blocks: list[list[int]] = [[] for _ in range(max(rgs) + 1)]
        for v, b in enumerate(rgs):
            blocks[b].append(v)
        yield TwoLevelTree(tuple(tuple(b) for b in blocks))


def brute_force_min_se(g: WeightedGraph) -> tuple[TwoLevelTree, float]:
    """Minimum two-level structural entropy over every partition of ``g``.

    Partitions are visited in restricted-growth order by depth-first search
    that carries each block's volume, cut and summed leaf cut; the first
    minimum (up to 1e-12) is kept.
    """
    n = g.n
    if not 1 <= n <= MAX_ORACLE_N:
        raise SizeBoundError(f"exhaustive search supports 1..{MAX_ORACLE_N} vertices, got {n}")
    vol_root = g.total_volume()
    if vol_root == 0.0:
        return TwoLevelTree.singletons(n), 0.0

    deg = g.degrees()
    leaf_cut = [deg[v] - g.selfloop(v) for v in range(n)]
    w = [[0.0] * n for _ in range(n)]
    for u, v, wt in g.iter_edges():
        if u != v:
            w[u][v] = w[v][u] = wt
    leaf_const = sum(xlog2(leaf_cut[v], deg[v]) for v in range(n))

    blocks: list[list[int]] = []
    bvol: list[float] = []
    bcut: list[float] = []
    bleaf: list[float] = []
    labels = [0] * n
    best = [float("inf"), None]

    def block_term(i: int) -> float:
        return -xlog2(bcut[i], bvol[i] / vol_root) + xlog2(bleaf[i], bvol[i])

    def visit(v: int) -> None:
        if v == n:
            se = (sum(block_term(i) for i in range(len(blocks))) - leaf_const) / vol_root
            if se < best[0] - 1e-12:
                best[0] = se
                best[1] = list(labels)
            return
        for i in range(len(blocks) + 1):
            if i == len(blocks):
                blocks.append([])
                bvol.append(0.0)
                bcut.append(0.0)
                bleaf.append(0.0)
            link = sum(w[v][x] for x in blocks[i])
            blocks[i].append(v)
            bvol[i] += deg[v]
            bcut[i] += leaf_cut[v] - 2.0 * link
            bleaf[i] += leaf_cut[v]
            labels[v] = i
            visit(v + 1)
            blocks[i].pop()
            bvol[i] -= deg[v]
            bcut[i] -= leaf_cut[v] - 2.0 * link
            bleaf[i] -= leaf_cut[v]
            if not blocks[i]:
                blocks.pop()
                bvol.pop()
                bcut.pop()
                bleaf.pop()

    visit(0)
    return TwoLevelTree.from_labels(best[1]), max(best[0], 0.0)


@dataclass(frozen=True)
class SynthConfig:
    cluster_sizes: tuple[int, ...] = (3, 3)
    dim: int = 32
    intra_noise: float = 0.05
    seed: int = 0
    layout: str = "aligned"

    def __post_init__(self):
        object.__setattr__(self, "cluster_sizes", tuple(int(s) for s in self.cluster_sizes))
        if not self.cluster_sizes:
            raise ValueError("need at least one cluster")
        if any(s < 1 for s in self.cluster_sizes):
            raise ValueError(f"cluster sizes must be >= 1, got {list(self.cluster_sizes)}")
        if self.dim < 2:
            raise ValueError(f"dim must be >= 2, got {self.dim}")
        if not self.intra_noise >= 0.0:
            raise ValueError(f"intra_noise must be >= 0, got {self.intra_noise}")
        if self.layout not in ("aligned", "misaligned"):
            raise ValueError(f"layout must be 'aligned' or 'misaligned', got {self.layout!r}")

    @property
    def n_clusters(self) -> int:
        return len(self.cluster_sizes)


@dataclass
class PlantedDialogue:
    dialogue: Dialogue
    embeddings: np.ndarray
    planted: list[str]  # per utterance; the root is "shared"

    def planted_labels(self) -> list[str]:
        """Labels of the non-root utterances."""
        return self.planted[1:]


def _unit(rng: np.random.Generator, dim: int) -> np.ndarray:
    v = rng.standard_normal(dim)
    return v / np.linalg.norm(v)


def synth_dialogue(cfg: SynthConfig) -> PlantedDialogue:
    """Random dialogue whose utterance embeddings form the planted clusters.

    In the ``aligned`` layout each cluster is its own reply chain under the
    root.  In the ``misaligned`` layout the clusters are interleaved
    round-robin into a single chain, so the reply structure carries no
    information about the clusters.
    """
    rng = np.random.default_rng(cfg.seed)
    root = _unit(rng, cfg.dim)
    centroids = [_unit(rng, cfg.dim) for _ in cfg.cluster_sizes]
    members = []
    for c, size in enumerate(cfg.cluster_sizes):
        for _ in range(size):
            v = centroids[c] + cfg.intra_noise * rng.standard_normal(cfg.dim)
            members.append((c, v / np.linalg.norm(v)))

    if cfg.layout == "aligned":
        chains = []
        start = 0
        for size in cfg.cluster_sizes:
            chains.append(list(range(start, start + size)))
            start += size
    else:
        queues = []
        start = 0
        for size in cfg.cluster_sizes:
            queues.append(list(range(start, start + size)))
            start += size
        order = []
        while any(queues):
            for q in queues:
                if q:
                    order.append(q.pop(0))
        chains = [order]

    rows = [root]
    planted = ["shared"]
    replies = [-1]
    for chain in chains:
        parent = 0
        for m in chain:
            c, vec = members[m]
            replies.append(parent)
            parent = len(rows)
            rows.append(vec)
            planted.append(f"c{c}")

    n = len(rows)
    speakers = [f"s{i % 3}" for i in range(n)]
    utterances = [f"utterance {i}" for i in range(n)]
    dialogue = Dialogue(f"synth-{cfg.seed}", utterances, speakers, replies)
    return PlantedDialogue(dialogue, np.vstack(rows), planted)
