"""Exit criteria.  Each test records one PASS/FAIL line, printed in the terminal summary."""

import math
import time

import numpy as np
import pytest

from separt.baselines import ari, labels_from_subdialogues, reply_partition
from separt.cli import DEFAULT_K, DEFAULT_SIGMA, build_parser, main
from separt.dialogue import attach_root, build_graph
from separt.dsem import ClusterState, DsemConfig, max_operate, run_dsem, select_merges
from separt.entropy import TwoLevelTree, one_dim_entropy, structural_entropy
from separt.graph import WeightedGraph
from separt.verification import SynthConfig, brute_force_min_se, synth_dialogue

from conftest import A, B, C, D, random_graph

RESULTS: list[str] = []


def record(number, ok, detail):
    RESULTS.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail}")
    assert ok, detail


def _tree_of(state):
    return TwoLevelTree.from_clusters(state.members.values(), state.graph.n)


def _checked_run(g, cfg):
    """Replay DSEM round by round, checking every gain against a from-scratch difference.

    Returns (worst gain error, worst per-round descent error, final entropy, final tree).
    """
    state = ClusterState(g)
    gain_err = descent_err = 0.0
    while True:
        base = structural_entropy(g, _tree_of(state))
        cands = []
        for a, b in state.pairs():
            gain = state.gain(a, b)
            merged = [m for c, m in state.members.items() if c not in (a, b)] + [state.members[a] + state.members[b]]
            scratch = base - structural_entropy(g, TwoLevelTree.from_clusters(merged, g.n))
            gain_err = max(gain_err, abs(gain - scratch))
            if gain > cfg.gain_tolerance:
                cands.append(((a, b), gain))
        if not cands:
            break
        gains = dict(cands)
        chosen = select_merges(cands, max_operate(state.current_num, cfg.sigma))
        for a, b in chosen:
            state.merge(a, b)
        after = structural_entropy(g, _tree_of(state))
        descent_err = max(descent_err, abs((base - after) - sum(gains[p] for p in chosen)))
    return gain_err, descent_err, structural_entropy(g, _tree_of(state)), _tree_of(state)


@pytest.fixture(scope="module")
def random_runs():
    runs = []
    t0 = time.perf_counter()
    for seed in range(200):
        rng = np.random.default_rng(seed)
        g = random_graph(rng, int(rng.integers(2, 13)), density=rng.uniform(0.1, 1.0))
        cfg = DsemConfig(sigma=float(rng.choice([0.15, 0.35, 0.55, 1.0])))
        gain_err, descent_err, final, tree = _checked_run(g, cfg)
        runs.append((g, cfg, gain_err, descent_err, final, tree))
    return runs, time.perf_counter() - t0


def test_criterion_1_exact_values():
    two = WeightedGraph.from_edges(2, [(A, B, 1.0)])
    tri = WeightedGraph.from_edges(3, [(A, B, 1.0), (B, C, 1.0), (A, C, 1.0)])
    errs = [
        abs(structural_entropy(two, TwoLevelTree.singletons(2)) - 1.0),
        abs(structural_entropy(two, TwoLevelTree.from_clusters([[A, B]])) - 1.0),
        abs(one_dim_entropy(tri) - math.log2(3)),
    ]
    record(1, max(errs) <= 1e-12, f"exact SE values, max error {max(errs):.1e} (tol 1e-12)")


def test_criterion_2_incremental_gains(random_runs):
    runs, elapsed = random_runs
    worst = max(r[2] for r in runs)
    # the replay must be the same algorithm as run_dsem
    same = all(run_dsem(g, cfg)[0] == tree for g, cfg, *_, tree in runs)
    ok = worst <= 1e-9 and same and elapsed < 10.0
    record(2, ok, f"{len(runs)} graphs, max |gain - scratch| {worst:.1e} (tol 1e-9), replay==run_dsem {same}, {elapsed:.2f}s (< 10s)")


def test_criterion_3_monotone_descent(random_runs):
    runs, _ = random_runs
    worst = max(r[3] for r in runs)
    above = [i for i, (g, *_, final, _) in enumerate(runs) if final > one_dim_entropy(g) + 1e-12]
    traces_ok = True
    for g, cfg, *_ in runs:
        _, trace = run_dsem(g, cfg)
        for r in trace.rounds:
            traces_ok &= abs(r.entropy_before - r.entropy_after - sum(r.gains)) <= 1e-6 and r.entropy_after < r.entropy_before
    ok = worst <= 1e-6 and not above and traces_ok
    record(3, ok, f"max per-round descent error {worst:.1e} (tol 1e-6), final > 1D in {len(above)} runs, traces consistent {traces_ok}")


def test_criterion_4_oracle_bound():
    t0 = time.perf_counter()
    worst = math.inf
    for seed in range(100):
        rng = np.random.default_rng(10_000 + seed)
        g = random_graph(rng, int(rng.integers(1, 8)))
        _, best = brute_force_min_se(g)
        _, trace = run_dsem(g, DsemConfig(sigma=float(rng.choice([0.15, 0.35, 0.5]))))
        worst = min(worst, trace.entropy_final - best)
    planted = WeightedGraph.from_edges(4, [(A, B, 1.0), (C, D, 1.0), (A, C, 0.1)])
    tree, _ = run_dsem(planted, DsemConfig(sigma=0.5))
    oracle_tree, _ = brute_force_min_se(planted)
    fixture_ok = tree == oracle_tree == TwoLevelTree.from_clusters([[A, B], [C, D]])
    elapsed = time.perf_counter() - t0
    ok = worst >= -1e-9 and fixture_ok and elapsed < 30.0
    record(4, ok, f"min(DSEM - oracle) {worst:.2e} (>= -1e-9), planted 4-graph optimal {fixture_ok}, {elapsed:.2f}s (< 30s)")


def _random_sizes(seed):
    rng = np.random.default_rng(seed)
    return tuple(int(s) for s in rng.integers(3, 7, size=int(rng.integers(2, 5))))


def test_criterion_5_planted_recovery():
    t0 = time.perf_counter()
    hits = 0
    for seed in range(100):
        p = synth_dialogue(SynthConfig(_random_sizes(seed), intra_noise=0.1, seed=seed))
        g = build_graph(p.dialogue, p.embeddings)
        tree, _ = run_dsem(g, DsemConfig(sigma=DEFAULT_SIGMA))
        hits += ari(labels_from_subdialogues(attach_root(tree), g.n), p.planted_labels()) == 1.0
    elapsed = time.perf_counter() - t0
    record(5, hits >= 95 and elapsed < 10.0, f"ARI = 1 in {hits}/100 seeds (need >= 95), {elapsed:.2f}s (< 10s)")


def test_criterion_6_ablation_direction():
    t0 = time.perf_counter()
    dsem_scores, reply_scores = [], []
    for seed in range(50):
        p = synth_dialogue(SynthConfig(_random_sizes(seed), intra_noise=0.1, seed=seed, layout="misaligned"))
        g = build_graph(p.dialogue, p.embeddings)
        tree, _ = run_dsem(g)
        truth = p.planted_labels()
        dsem_scores.append(ari(labels_from_subdialogues(attach_root(tree), g.n), truth))
        reply_scores.append(ari(labels_from_subdialogues(reply_partition(p.dialogue), g.n), truth))
    elapsed = time.perf_counter() - t0
    d, r = float(np.mean(dsem_scores)), float(np.mean(reply_scores))
    record(6, d > r and elapsed < 20.0, f"misaligned, 50 seeds: mean ARI DSEM {d:.3f} > reply {r:.3f}, {elapsed:.2f}s (< 20s)")


def _time_partition(sizes, layout):
    p = synth_dialogue(SynthConfig(sizes, seed=0, layout=layout))
    assert p.dialogue.n == sum(sizes) + 1
    t0 = time.perf_counter()
    run_dsem(build_graph(p.dialogue, p.embeddings), DsemConfig(sigma=DEFAULT_SIGMA))
    return time.perf_counter() - t0


def test_criterion_7_complexity():
    times = {}
    for layout in ("aligned", "misaligned"):
        times[100, layout] = _time_partition((11,) * 9, layout)
        times[200, layout] = _time_partition((20,) * 9 + (19,), layout)
    t100 = max(times[100, lay] for lay in ("aligned", "misaligned"))
    t200 = max(times[200, lay] for lay in ("aligned", "misaligned"))
    record(7, t100 < 1.0 and t200 < 8.0, f"100 utterances {t100:.3f}s (< 1s), 200 utterances {t200:.3f}s (< 8s)")


def test_criterion_8_determinism(tmp_path):
    outputs = []
    for run in ("a", "b"):
        prefix = tmp_path / f"synth_{run}"
        assert main(["synth", "--sizes", "4,3,5", "--seed", "42", "--noise", "0.1", "--out", str(prefix)]) == 0
        report = tmp_path / f"report_{run}.json"
        assert main(["partition", "--dialogue", f"{prefix}.json", "--embeddings", f"{prefix}.semd", "--trace", "--out", str(report)]) == 0
        outputs.append([(tmp_path / f"synth_{run}.json").read_bytes(), (tmp_path / f"synth_{run}.semd").read_bytes(), report.read_bytes()])
    same = outputs[0] == outputs[1]
    record(8, same, f"synth + partition outputs byte-identical across runs: {same}")


def test_criterion_9_defaults():
    parser = build_parser()
    sigma = parser.parse_args(["partition", "--dialogue", "d", "--embeddings", "e"]).sigma
    k = parser.parse_args(["baseline", "--method", "kmeans", "--dialogue", "d"]).k
    bench = parser.parse_args(["bench"])
    ok = sigma == 0.15 and k == 3 and DEFAULT_SIGMA == 0.15 and DEFAULT_K == 3 and bench.k == 3
    record(9, ok, f"default sigma {sigma}, default k {k}")
