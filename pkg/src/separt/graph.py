"""Weighted undirected graph over dense integer vertices.

A self-loop of weight ``w`` adds ``w`` (not ``2w``) to its vertex's degree
and never contributes to a cut, so ``degree(v) == cut({v}) + selfloop(v)``.
"""

from __future__ import annotations

from collections.abc import Iterable, Iterator


class GraphError(ValueError):
    """Malformed graph input."""


class WeightedGraph:
    def __init__(self, n: int):
        if n < 0:
            raise GraphError(f"vertex count must be non-negative, got {n}")
        self.n = n
        self._edges: dict[tuple[int, int], float] = {}
        self._adj: list[dict[int, float]] = [{} for _ in range(n)]
        self._loops = [0.0] * n
        self._degree = [0.0] * n

    @classmethod
    def from_edges(cls, n: int, edges: Iterable[tuple[int, int, float]]) -> "WeightedGraph":
        g = cls(n)
        for u, v, w in edges:
            g.add_edge(u, v, w)
        return g

    def _check(self, v: int) -> None:
        if not (isinstance(v, int) and 0 <= v < self.n):
            raise GraphError(f"vertex {v!r} out of range [0, {self.n})")

    def add_edge(self, u: int, v: int, w: float) -> "WeightedGraph":
        """Insert edge ``(u, v)`` with weight ``w``; zero weights are dropped."""
        self._check(u)
        self._check(v)
        w = float(w)
        if not w >= 0.0:
            raise GraphError(f"negative or NaN weight {w} on ({u}, {v})")
        key = (u, v) if u <= v else (v, u)
        if key in self._edges:
            raise GraphError(f"duplicate edge {key}")
        if w == 0.0:
            return self
        self._edges[key] = w
        if u == v:
            self._loops[u] = w
            self._degree[u] += w
        else:
            self._adj[u][v] = w
            self._adj[v][u] = w
            self._degree[u] += w
            self._degree[v] += w
        return self

    @property
    def edges(self) -> dict[tuple[int, int], float]:
        return dict(self._edges)

    def iter_edges(self) -> Iterator[tuple[int, int, float]]:
        for (u, v), w in sorted(self._edges.items()):
            yield u, v, w

    def neighbors(self, v: int) -> dict[int, float]:
        """Non-loop neighbours of ``v`` with their weights."""
        self._check(v)
        return self._adj[v]

    def selfloop(self, v: int) -> float:
        self._check(v)
        return self._loops[v]

    def degree(self, v: int) -> float:
        self._check(v)
        return self._degree[v]

    def degrees(self) -> list[float]:
        return list(self._degree)

    def volume(self, vertices: Iterable[int]) -> float:
        total = 0.0
        for v in set(vertices):
            total += self.degree(v)
        return total

    def total_volume(self) -> float:
        return sum(self._degree)

    def cut(self, vertices: Iterable[int]) -> float:
        """Weight of edges with exactly one endpoint in ``vertices``."""
        members = set(vertices)
        for v in members:
            self._check(v)
        total = 0.0
        for v in members:
            for x, w in self._adj[v].items():
                if x not in members:
                    total += w
        return total

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return self.n == other.n and self._edges == other._edges

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.n}, edges={len(self._edges)})"


def add_edge(g: WeightedGraph, u: int, v: int, w: float) -> WeightedGraph:
    return g.add_edge(u, v, w)


def degree(g: WeightedGraph, v: int) -> float:
    return g.degree(v)


def volume(g: WeightedGraph, vertices: Iterable[int]) -> float:
    return g.volume(vertices)


def cut(g: WeightedGraph, vertices: Iterable[int]) -> float:
    return g.cut(vertices)
