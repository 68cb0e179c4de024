"""Command-line entry point.

Exit codes: 0 success, 2 malformed input, 3 dialogue/embedding mismatch,
4 graph too large for the exhaustive oracle.
"""

from __future__ import annotations

import argparse
import csv
import io as _io
import logging
import sys

from separt import io
from separt.baselines import kmeans_partition, reply_partition
from separt.dialogue import DialogueError, MismatchError, attach_root
from separt.dsem import DsemConfig
from separt.entropy import PartitionError, TwoLevelTree, one_dim_entropy, structural_entropy
from separt.pipeline import BENCH_COLUMNS, partition_dialogue, run_bench
from separt.verification import MAX_ORACLE_N, SynthConfig, brute_force_min_se, synth_dialogue

EXIT_OK, EXIT_INPUT, EXIT_MISMATCH, EXIT_SIZE = 0, 2, 3, 4
DEFAULT_SIGMA = 0.15
DEFAULT_K = 3

log = logging.getLogger("separt")


class CliError(Exception):
    def __init__(self, message: str, code: int = EXIT_INPUT):
        super().__init__(message)
        self.code = code


def _emit(text: str, out: str | None) -> None:
    if out in (None, "-"):
        sys.stdout.write(text)
    else:
        with open(out, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def _int_list(text: str) -> list[int]:
    try:
        return [int(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise CliError(f"expected comma-separated integers, got {text!r}") from exc


def _float_list(text: str) -> list[float]:
    try:
        return [float(x) for x in text.split(",") if x.strip()]
    except ValueError as exc:
        raise CliError(f"expected comma-separated numbers, got {text!r}") from exc


def _load_pair(args):
    d = io.read_dialogue(args.dialogue)
    e = io.read_embeddings(args.embeddings)
    if e.shape[0] != d.n:
        raise CliError(f"{args.embeddings} has {e.shape[0]} rows but the dialogue has {d.n} utterances", EXIT_MISMATCH)
    return d, e


def _dsem_config(args) -> DsemConfig:
    try:
        return DsemConfig(sigma=args.sigma, max_rounds=args.max_rounds)
    except ValueError as exc:
        raise CliError(str(exc)) from exc


def cmd_partition(args) -> int:
    d, e = _load_pair(args)
    report = partition_dialogue(d, e, _dsem_config(args))
    _emit(io.dumps(report.to_dict(with_trace=args.trace)), args.out)
    return EXIT_OK


def cmd_entropy(args) -> int:
    g = io.read_graph(args.graph)
    if args.partition is None:
        value = one_dim_entropy(g)
    else:
        tree = TwoLevelTree.from_clusters(io.parse_partition(args.partition), g.n)
        value = structural_entropy(g, tree)
    _emit(f"{value:.9f}\n", args.out)
    return EXIT_OK


def cmd_oracle(args) -> int:
    g = io.read_graph(args.graph)
    if g.n > MAX_ORACLE_N:
        raise CliError(f"exhaustive search supports at most {MAX_ORACLE_N} vertices, graph has {g.n}", EXIT_SIZE)
    if g.n == 0:
        raise CliError("graph has no vertices")
    tree, se = brute_force_min_se(g)
    _emit(io.dumps({"partition": tree.as_lists(), "entropy": round(se, 9)}), args.out)
    return EXIT_OK


def cmd_synth(args) -> int:
    try:
        cfg = SynthConfig(tuple(_int_list(args.sizes)), args.dim, args.noise, args.seed, args.layout)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    p = synth_dialogue(cfg)
    p.dialogue.extra["planted"] = p.planted
    io.write_dialogue(f"{args.out}.json", p.dialogue)
    io.write_embeddings(f"{args.out}.semd", p.embeddings)
    log.info("wrote %s.json and %s.semd (%d utterances)", args.out, args.out, p.dialogue.n)
    return EXIT_OK


def cmd_baseline(args) -> int:
    d = io.read_dialogue(args.dialogue)
    if args.method == "reply":
        subs = reply_partition(d)
    else:
        if args.embeddings is None:
            raise CliError("--embeddings is required for the kmeans baseline")
        d, e = _load_pair(args)
        try:
            labels = kmeans_partition(e, args.k, seed=args.seed)
        except ValueError as exc:
            raise CliError(str(exc)) from exc
        subs = attach_root(TwoLevelTree.from_labels(labels).clusters)
    doc = {"doc_id": d.doc_id, "method": args.method, "sub_dialogues": subs}
    if args.method == "kmeans":
        doc["k"] = args.k
    _emit(io.dumps(doc), args.out)
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.seeds < 1:
        raise CliError("--seeds must be at least 1")
    sizes = _int_list(args.sizes)
    sigmas = _float_list(args.sigmas)
    layouts = [args.layout] if args.layout else ["aligned", "misaligned"]
    try:
        for s in sigmas:
            DsemConfig(sigma=s)
        rows = run_bench(sizes, sigmas, range(args.seed, args.seed + args.seeds), layouts, args.dim, args.noise, args.k)
    except ValueError as exc:
        raise CliError(str(exc)) from exc
    buf = _io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(BENCH_COLUMNS)
    for row in rows:
        writer.writerow([f"{row[c]:.9f}" if isinstance(row[c], float) else row[c] for c in BENCH_COLUMNS])
    _emit(buf.getvalue(), args.out)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="separt", description="Split dialogues into sub-dialogues by structural entropy minimisation.")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("partition", help="partition one dialogue with DSEM")
    p.add_argument("--dialogue", required=True)
    p.add_argument("--embeddings", required=True)
    p.add_argument("--sigma", type=float, default=DEFAULT_SIGMA)
    p.add_argument("--max-rounds", type=int, default=10_000)
    p.add_argument("--trace", action="store_true", help="include per-round merges in the report")
    p.add_argument("--out")
    p.set_defaults(func=cmd_partition)

    p = sub.add_parser("entropy", help="structural entropy of a graph under a partition")
    p.add_argument("--graph", required=True)
    p.add_argument("--partition", help="JSON list of vertex lists, inline or as a file; omit for the one-dimensional tree")
    p.add_argument("--out")
    p.set_defaults(func=cmd_entropy)

    p = sub.add_parser("oracle", help=f"exact minimum by exhaustive search (at most {MAX_ORACLE_N} vertices)")
    p.add_argument("--graph", required=True)
    p.add_argument("--out")
    p.set_defaults(func=cmd_oracle)

    p = sub.add_parser("synth", help="write a synthetic dialogue with planted clusters")
    p.add_argument("--sizes", default="3,3", help="comma-separated cluster sizes")
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--noise", type=float, default=0.05)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--layout", choices=["aligned", "misaligned"], default="aligned")
    p.add_argument("--out", required=True, help="output prefix; writes PREFIX.json and PREFIX.semd")
    p.set_defaults(func=cmd_synth)

    p = sub.add_parser("baseline", help="ablation partitioners")
    p.add_argument("--method", choices=["reply", "kmeans"], required=True)
    p.add_argument("--dialogue", required=True)
    p.add_argument("--embeddings")
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--out")
    p.set_defaults(func=cmd_baseline)

    p = sub.add_parser("bench", help="sigma sweep on synthetic dialogues")
    p.add_argument("--sizes", default="4,4,4")
    p.add_argument("--sigmas", default="0.15,0.35,0.55")
    p.add_argument("--seeds", type=int, default=50, help="number of seeds")
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--dim", type=int, default=32)
    p.add_argument("--noise", type=float, default=0.1)
    p.add_argument("--k", type=int, default=DEFAULT_K)
    p.add_argument("--layout", choices=["aligned", "misaligned"])
    p.add_argument("--out")
    p.set_defaults(func=cmd_bench)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING, format="%(levelname)s %(message)s")
    try:
        return args.func(args)
    except CliError as exc:
        print(f"separt: {exc}", file=sys.stderr)
        return exc.code
    except MismatchError as exc:
        print(f"separt: {exc}", file=sys.stderr)
        return EXIT_MISMATCH
    except (io.InputError, DialogueError, PartitionError) as exc:
        print(f"separt: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
