"""Ablation partitioners (reply lines, k-means) and partition agreement scores."""

from __future__ import annotations

from collections.abc import Hashable, Sequence

import numpy as np

from separt.dialogue import Dialogue, check_replies, embedding_matrix


def reply_partition(d: Dialogue | Sequence[int]) -> list[list[int]]:
    """One sub-dialogue per direct reply to the root, holding its whole subtree."""
    replies = d.replies if isinstance(d, Dialogue) else list(d)
    check_replies(replies)
    top = list(range(len(replies)))
    for i in range(1, len(replies)):
        # parents precede children, so the parent's line is already known
        top[i] = i if replies[i] == 0 else top[replies[i]]
    lines: dict[int, list[int]] = {}
    for i in range(1, len(replies)):
        lines.setdefault(top[i], [0]).append(i)
    if not lines:
        return [[0]]
    return [lines[k] for k in sorted(lines)]


def _kmeans_pp(x: np.ndarray, k: int, rng: np.random.Generator) -> np.ndarray:
    n = x.shape[0]
    chosen = [int(rng.integers(n))]
    d2 = np.sum((x - x[chosen[0]]) ** 2, axis=1)
    for _ in range(1, k):
        total = d2.sum()
        if total > 0.0:
            nxt = int(rng.choice(n, p=d2 / total))
        else:
            rest = np.setdiff1d(np.arange(n), chosen)
            nxt = int(rng.choice(rest))
        chosen.append(nxt)
        d2 = np.minimum(d2, np.sum((x - x[nxt]) ** 2, axis=1))
    return x[chosen].copy()


def kmeans_partition(
    embeddings, k: int = 3, seed: int = 0, max_iter: int = 100, tol: float = 1e-6
) -> list[int]:
    """Lloyd's k-means on L2-normalised rows with k-means++ seeding.

    Returns a cluster label per row.
    """
    x = embedding_matrix(embeddings)
    n = x.shape[0]
    if not 1 <= k <= n:
        raise ValueError(f"k must lie in [1, {n}], got {k}")
    x = x / np.linalg.norm(x, axis=1, keepdims=True)
    if k == n:
        return list(range(n))
    rng = np.random.default_rng(seed)
    centers = _kmeans_pp(x, k, rng)
    for _ in range(max_iter):
        dist = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
        labels = dist.argmin(axis=1)
        new = centers.copy()
        for c in range(k):
            mask = labels == c
            if mask.any():
                new[c] = x[mask].mean(axis=0)
        shift = np.sqrt(((new - centers) ** 2).sum(axis=1)).max()
        centers = new
        if shift <= tol:
            break
    dist = ((x[:, None, :] - centers[None, :, :]) ** 2).sum(axis=2)
    return canonical_labels(dist.argmin(axis=1).tolist())


def canonical_labels(labels: Sequence[Hashable]) -> list[int]:
    """Relabel so clusters are numbered in order of first appearance."""
    seen: dict[Hashable, int] = {}
    return [seen.setdefault(lab, len(seen)) for lab in labels]


def labels_from_subdialogues(subs: Sequence[Sequence[int]], n: int) -> list[int]:
    """Cluster label of each non-root utterance ``1..n-1``; the shared root is skipped."""
    labels: list[int | None] = [None] * n
    for c, sub in enumerate(subs):
        for v in sub:
            if v == 0:
                continue
            if labels[v] is not None:
                raise ValueError(f"utterance {v} appears in more than one sub-dialogue")
            labels[v] = c
    missing = [v for v in range(1, n) if labels[v] is None]
    if missing:
        raise ValueError(f"utterances {missing} are in no sub-dialogue")
    return labels[1:]


def _contingency(p: Sequence[Hashable], q: Sequence[Hashable]) -> np.ndarray:
    if len(p) != len(q):
        raise ValueError(f"partitions cover {len(p)} and {len(q)} vertices")
    pl, ql = canonical_labels(p), canonical_labels(q)
    table = np.zeros((max(pl, default=-1) + 1, max(ql, default=-1) + 1))
    for a, b in zip(pl, ql):
        table[a, b] += 1
    return table


def _comb2(x):
    return x * (x - 1) / 2.0


def ari(p: Sequence[Hashable], q: Sequence[Hashable]) -> float:
    """Adjusted Rand index between two labelings of the same vertices."""
    table = _contingency(p, q)
    n = table.sum()
    if n < 2:
        return 1.0
    index = _comb2(table).sum()
    rows = _comb2(table.sum(axis=1)).sum()
    cols = _comb2(table.sum(axis=0)).sum()
    expected = rows * cols / _comb2(n)
    top = (rows + cols) / 2.0
    if top == expected:
        # both trivial in the same way (all-in-one vs all-in-one, or singletons vs singletons)
        return 1.0 if index == expected else 0.0
    return float((index - expected) / (top - expected))


def _entropy(counts: np.ndarray, n: float) -> float:
    probs = counts[counts > 0] / n
    return float(-(probs * np.log(probs)).sum())


def nmi(p: Sequence[Hashable], q: Sequence[Hashable]) -> float:
    """Normalised mutual information, arithmetic-mean normalisation.

    Zero when either labeling is a single cluster.
    """
    table = _contingency(p, q)
    n = table.sum()
    if n == 0:
        return 0.0
    hp = _entropy(table.sum(axis=1), n)
    hq = _entropy(table.sum(axis=0), n)
    if hp == 0.0 or hq == 0.0:
        return 0.0
    outer = np.outer(table.sum(axis=1), table.sum(axis=0))
    nz = table > 0
    mi = float((table[nz] / n * np.log(table[nz] * n / outer[nz])).sum())
    return min(1.0, max(0.0, mi / ((hp + hq) / 2.0)))

