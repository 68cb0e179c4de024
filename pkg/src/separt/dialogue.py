"""Dialogue graphs from reply trees and utterance embeddings."""

from __future__ import annotations

from collections.abc import Iterable, Sequence
from dataclasses import dataclass, field

import numpy as np

from separt.entropy import TwoLevelTree
from separt.graph import WeightedGraph


class DialogueError(ValueError):
    """Malformed dialogue or embeddings."""


class MismatchError(DialogueError):
    """Dialogue and embeddings disagree on the number of utterances."""


def check_replies(replies: Sequence[int]) -> None:
    if len(replies) == 0:
        raise DialogueError("dialogue has no utterances")
    if replies[0] != -1:
        raise DialogueError(f"first reply index must be -1, got {replies[0]}")
    for i, parent in enumerate(replies[1:], start=1):
        if not (isinstance(parent, (int, np.integer)) and 0 <= parent < i):
            raise DialogueError(f"utterance {i} replies to {parent}, expected an index in [0, {i})")


@dataclass
class Dialogue:
    doc_id: str
    utterances: list[str]
    speakers: list[str]
    replies: list[int]
    extra: dict = field(default_factory=dict, repr=False)

    def __post_init__(self):
        if not (len(self.utterances) == len(self.speakers) == len(self.replies)):
            raise DialogueError(
                f"{self.doc_id}: {len(self.utterances)} utterances, {len(self.speakers)} speakers, "
                f"{len(self.replies)} replies"
            )
        check_replies(self.replies)

    @property
    def n(self) -> int:
        return len(self.replies)


def ancestors(replies: Sequence[int], i: int) -> list[int]:
    out = []
    parent = replies[i]
    while parent >= 0:
        out.append(parent)
        parent = replies[parent]
    return out


def thread_closure(replies: Sequence[int]) -> set[tuple[int, int]]:
    """Pairs ``(i, j)``, ``i < j``, where one utterance is an ancestor of the other.

    Siblings on different branches stay unconnected.
    """
    check_replies(replies)
    return {(a, i) for i in range(1, len(replies)) for a in ancestors(replies, i)}


def embedding_matrix(embeddings, n: int | None = None) -> np.ndarray:
    e = np.asarray(embeddings, dtype=np.float64)
    if e.ndim != 2:
        raise DialogueError(f"embeddings must be a 2-d matrix, got shape {e.shape}")
    if n is not None and e.shape[0] != n:
        raise MismatchError(f"{e.shape[0]} embedding rows for {n} utterances")
    if not np.all(np.isfinite(e)):
        raise DialogueError("embeddings contain non-finite values")
    norms = np.linalg.norm(e, axis=1)
    if np.any(norms == 0.0):
        raise DialogueError(f"zero-norm embedding rows: {np.flatnonzero(norms == 0.0).tolist()}")
    return e


def build_graph(d: Dialogue | Sequence[int], embeddings) -> WeightedGraph:
    """Weighted dialogue graph: thread-closure edges weighted by clipped cosine.

    Every vertex carries a self-loop of weight 1.
    """
    replies = d.replies if isinstance(d, Dialogue) else list(d)
    check_replies(replies)
    e = embedding_matrix(embeddings, len(replies))
    unit = e / np.linalg.norm(e, axis=1, keepdims=True)
    g = WeightedGraph(len(replies))
    for v in range(g.n):
        g.add_edge(v, v, 1.0)
    for i, j in sorted(thread_closure(replies)):
        w = float(unit[i] @ unit[j])
        if w > 0.0:
            g.add_edge(i, j, min(w, 1.0))
    return g


def attach_root(partition: TwoLevelTree | Iterable[Iterable[int]]) -> list[list[int]]:
    """Add utterance 0 to every cluster.

    A cluster holding only the root is dropped when other clusters exist,
    since each of them already contains it.
    """
    clusters = partition.clusters if isinstance(partition, TwoLevelTree) else partition
    clusters = sorted(tuple(sorted(c)) for c in clusters)
    if len(clusters) > 1:
        clusters = [c for c in clusters if c != (0,)]
    return [sorted(set(c) | {0}) for c in clusters]
