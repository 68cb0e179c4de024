"""End-to-end partitioning of a dialogue and the sigma benchmark."""

from __future__ import annotations

import time
from collections.abc import Sequence
from dataclasses import dataclass

import numpy as np

from separt.baselines import ari, kmeans_partition, labels_from_subdialogues, reply_partition
from separt.dialogue import Dialogue, attach_root, build_graph
from separt.dsem import DsemConfig, MergeTrace, run_dsem
from separt.entropy import one_dim_entropy
from separt.verification import SynthConfig, synth_dialogue


@dataclass
class PartitionReport:
    doc_id: str
    sigma: float
    entropy_1d: float
    entropy_final: float
    rounds: int
    sub_dialogues: list[list[int]]
    trace: MergeTrace | None = None

    def to_dict(self, with_trace: bool = False) -> dict:
        doc = {
            "doc_id": self.doc_id,
            "sigma": self.sigma,
            "entropy_1d": round(self.entropy_1d, 9),
            "entropy_final": round(self.entropy_final, 9),
            "rounds": self.rounds,
            "sub_dialogues": self.sub_dialogues,
        }
        if with_trace and self.trace is not None:
            doc["trace"] = self.trace.to_dict()
        return doc


def partition_dialogue(d: Dialogue, embeddings, cfg: DsemConfig | None = None) -> PartitionReport:
    cfg = cfg or DsemConfig()
    g = build_graph(d, embeddings)
    tree, trace = run_dsem(g, cfg)
    return PartitionReport(
        doc_id=d.doc_id,
        sigma=cfg.sigma,
        entropy_1d=one_dim_entropy(g),
        entropy_final=trace.entropy_final,
        rounds=len(trace.rounds),
        sub_dialogues=attach_root(tree),
        trace=trace,
    )


BENCH_COLUMNS = ("layout", "sigma", "seeds", "ari_dsem", "ari_reply", "ari_kmeans", "entropy_final", "rounds", "seconds")


def run_bench(
    cluster_sizes: Sequence[int],
    sigmas: Sequence[float],
    seeds: Sequence[int],
    layouts: Sequence[str] = ("aligned", "misaligned"),
    dim: int = 32,
    intra_noise: float = 0.1,
    k: int = 3,
) -> list[dict]:
    """Mean agreement with the planted clusters for DSEM and both baselines.

    One row per (layout, sigma).  ``seconds`` is the mean DSEM wall time and
    is the only non-deterministic column.
    """
    if not seeds:
        raise ValueError("at least one seed is required")
    rows = []
    for layout in layouts:
        planted = [synth_dialogue(SynthConfig(tuple(cluster_sizes), dim, intra_noise, s, layout)) for s in seeds]
        graphs = [build_graph(p.dialogue, p.embeddings) for p in planted]
        reply_scores = []
        kmeans_scores = []
        for seed, p in zip(seeds, planted):
            n = p.dialogue.n
            truth = p.planted_labels()
            reply_scores.append(ari(labels_from_subdialogues(reply_partition(p.dialogue), n), truth))
            # the root's own k-means label is irrelevant once it joins every cluster
            km = kmeans_partition(p.embeddings, min(k, n), seed=seed)
            kmeans_scores.append(ari(km[1:], truth))
        for sigma in sigmas:
            cfg = DsemConfig(sigma=sigma)
            scores, entropies, rounds, seconds = [], [], [], []
            for p, g in zip(planted, graphs):
                t0 = time.perf_counter()
                tree, trace = run_dsem(g, cfg)
                seconds.append(time.perf_counter() - t0)
                subs = attach_root(tree)
                scores.append(ari(labels_from_subdialogues(subs, g.n), p.planted_labels()))
                entropies.append(trace.entropy_final)
                rounds.append(len(trace.rounds))
            rows.append(
                {
                    "layout": layout,
                    "sigma": sigma,
                    "seeds": len(seeds),
                    "ari_dsem": float(np.mean(scores)),
                    "ari_reply": float(np.mean(reply_scores)),
                    "ari_kmeans": float(np.mean(kmeans_scores)),
                    "entropy_final": float(np.mean(entropies)),
                    "rounds": float(np.mean(rounds)),
                    "seconds": float(np.mean(seconds)),
                }
            )
    return rows
