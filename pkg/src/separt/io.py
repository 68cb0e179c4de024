"""Readers and writers for dialogue, embedding, graph and report files.

Dialogues and graphs are JSON documents.  Embeddings are either JSON
(``{"dim": d, "vectors": [[...], ...]}``) or the binary layout::

    b"SEMD" | uint32 n | uint32 dim | n * dim float32, row-major, little-endian
"""

from __future__ import annotations

import json
import struct
from pathlib import Path

import numpy as np

from separt.dialogue import Dialogue, DialogueError
from separt.graph import GraphError, WeightedGraph

MAGIC = b"SEMD"
_HEADER = struct.Struct("<4sII")


class InputError(ValueError):
    """A file is missing or does not parse."""


def _load_json(path) -> object:
    try:
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: invalid JSON ({exc})") from exc


def dumps(doc: object) -> str:
    return json.dumps(doc, indent=2, ensure_ascii=False) + "\n"


def dialogue_from_dict(doc: dict) -> Dialogue:
    if not isinstance(doc, dict):
        raise InputError("dialogue document must be a JSON object")
    try:
        sentences = [str(s) for s in doc["sentences"]]
        replies = doc["replies"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"dialogue is missing field {exc}") from exc
    speakers = [str(s) for s in doc.get("speakers", [""] * len(sentences))]
    if not isinstance(replies, list) or not all(isinstance(r, int) and not isinstance(r, bool) for r in replies):
        raise InputError("replies must be a list of integers")
    extra = {k: v for k, v in doc.items() if k not in ("doc_id", "sentences", "speakers", "replies")}
    try:
        return Dialogue(str(doc.get("doc_id", "")), sentences, speakers, list(replies), extra)
    except DialogueError as exc:
        raise InputError(str(exc)) from exc


def dialogue_to_dict(d: Dialogue) -> dict:
    doc = {"doc_id": d.doc_id, "sentences": d.utterances, "speakers": d.speakers, "replies": d.replies}
    doc.update(d.extra)
    return doc


def read_dialogue(path) -> Dialogue:
    return dialogue_from_dict(_load_json(path))


def write_dialogue(path, d: Dialogue) -> None:
    Path(path).write_text(dumps(dialogue_to_dict(d)), encoding="utf-8")


def read_embeddings(path) -> np.ndarray:
    try:
        raw = Path(path).read_bytes()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror or exc}") from exc
    if raw[:4] == MAGIC:
        if len(raw) < _HEADER.size:
            raise InputError(f"{path}: truncated header")
        _, n, dim = _HEADER.unpack_from(raw)
        body = raw[_HEADER.size:]
        if len(body) != 4 * n * dim:
            raise InputError(f"{path}: expected {n}x{dim} float32 values, got {len(body)} bytes")
        return np.frombuffer(body, dtype="<f4").astype(np.float64).reshape(n, dim)
    try:
        doc = json.loads(raw.decode("utf-8"))
        vectors = np.asarray(doc["vectors"], dtype=np.float64)
        dim = int(doc["dim"])
    except (UnicodeDecodeError, json.JSONDecodeError, KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: not a SEMD or JSON embedding file ({exc})") from exc
    if vectors.ndim != 2 or vectors.shape[1] != dim:
        raise InputError(f"{path}: vectors do not form an n x {dim} matrix")
    return vectors


def write_embeddings(path, e) -> None:
    e = np.ascontiguousarray(e, dtype="<f4")
    n, dim = e.shape
    Path(path).write_bytes(_HEADER.pack(MAGIC, n, dim) + e.tobytes())


def graph_from_dict(doc: dict) -> WeightedGraph:
    try:
        n = doc["n"]
        edges = doc["edges"]
    except (KeyError, TypeError) as exc:
        raise InputError(f"graph is missing field {exc}") from exc
    if not isinstance(n, int) or n < 0:
        raise InputError(f"n must be a non-negative integer, got {n!r}")
    g = WeightedGraph(n)
    for item in edges:
        try:
            u, v, w = item
            if not (isinstance(u, int) and isinstance(v, int)):
                raise GraphError(f"edge endpoints must be integers: {item}")
            g.add_edge(u, v, float(w))
        except (GraphError, TypeError, ValueError) as exc:
            raise InputError(f"bad edge {item!r}: {exc}") from exc
    return g


def graph_to_dict(g: WeightedGraph) -> dict:
    return {"n": g.n, "edges": [[u, v, w] for u, v, w in g.iter_edges()]}


def read_graph(path) -> WeightedGraph:
    return graph_from_dict(_load_json(path))


def parse_partition(spec: str) -> list[list[int]]:
    """Partition given inline as JSON (``[[0, 1], [2]]``) or as a path to a JSON file."""
    try:
        doc = json.loads(spec)
    except json.JSONDecodeError:
        doc = _load_json(spec)
    if not isinstance(doc, list) or not all(isinstance(c, list) for c in doc):
        raise InputError("partition must be a list of vertex lists")
    if not all(isinstance(v, int) for c in doc for v in c):
        raise InputError("partition vertices must be integers")
    return doc
