"""Command-line interface: ``hemln detect|baseline|stats|bench|generate``."""
from __future__ import annotations

import argparse
import os
import statistics
import sys
import time
from concurrent.futures import ThreadPoolExecutor
from numbers import Integral
from pathlib import Path

from ._validation import ALGORITHMS, METRICS
from .composer import classify_tuples, compute_assignments, evaluate_k_community
from .evaluation import baseline_modularity
from .exceptions import HemlnError
from .expression import parse_expression
from .louvain import CommunityAssignment, detect_layer_communities
from .mln import collapse_type_independent, dump_mln, load_mln

DEFAULT_SEED = 42


def _fmt(x) -> str:
    if isinstance(x, Integral):
        return str(int(x))
    return f"{x:.6g}"


def _positive_int(text):
    value = int(text)
    if value < 1:
        raise argparse.ArgumentTypeError(f"must be >= 1, got {value}")
    return value


def _executor(threads):
    return ThreadPoolExecutor(max_workers=threads) if threads and threads > 1 else None


def _assignments(mln, layers, args):
    """Layer communities, reusing/dumping ``--cache`` files when requested."""
    cache = Path(args.cache) if getattr(args, "cache", None) else None
    given = {}
    if cache is not None:
        cache.mkdir(parents=True, exist_ok=True)
        for name in layers:
            path = cache / f"{name}.seed{args.seed}.tsv"
            if path.exists():
                given[name] = CommunityAssignment.load(path, name)
    executor = _executor(args.threads)
    try:
        out = compute_assignments(mln, layers, args.seed, given=given, executor=executor)
    finally:
        if executor is not None:
            executor.shutdown()
    if cache is not None:
        for name in layers:
            path = cache / f"{name}.seed{args.seed}.tsv"
            if name not in given:
                out[name].dump(path)
    return out


def write_tuple_table(result, path, emit_edges=False):
    layers = list(result.layers)
    steps = [f"{s.left_layer}-{s.right_layer}" for s in result.expression.steps]
    lines = ["#" + "\t".join(layers + ["status"] + steps)]
    for t in result.tuples:
        fields = [str(c) for c in t.community_ids]
        fields.append("total" if t.is_total else "partial")
        fields += [str(len(x)) for x in t.edge_sets]
        lines.append("\t".join(fields))
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
    if emit_edges:
        edge_lines = ["#tuple\tu\tv"]
        for i, t in enumerate(result.tuples, start=1):
            for x in t.edge_sets:
                edge_lines += [f"{i}\t{u}\t{v}" for u, v in sorted(x)]
        Path(str(path) + ".edges.tsv").write_text("\n".join(edge_lines) + "\n", encoding="utf-8")


def run_detect(args) -> int:
    mln = load_mln(args.config)
    expr = parse_expression(args.expr, mln)
    assignments = _assignments(mln, expr.layers, args)
    result = evaluate_k_community(mln, expr, args.metric, args.algo, args.seed,
                                  assignments=assignments, hub_threshold=args.hub_threshold)
    write_tuple_table(result, args.out, args.emit_edges)
    total, partial = classify_tuples(result)
    print(f"seed={args.seed}")
    print(f"expr={expr} metric={args.metric} algo={args.algo}")
    for s in result.steps:
        print(f"step={s.position} left={s.left_layer} right={s.right_layer} case={s.case} "
              f"meta_edges={s.meta_edges} pairs={s.pairs} total_weight={_fmt(s.match_total)} "
              f"normalized_weight={_fmt(s.total_weight)} consistent={s.consistent} "
              f"no_match={s.no_match} inconsistent={s.inconsistent} seconds={s.seconds:.6f}")
    print(f"tuples={len(result.tuples)} total={len(total)} partial={len(partial)}")
    return 0


def run_baseline(args) -> int:
    mln = load_mln(args.config)
    graph = collapse_type_independent(mln)
    _, q = baseline_modularity(mln, seed=args.seed)
    print(f"seed={args.seed}")
    print(f"nodes={graph.number_of_nodes()} edges={graph.number_of_edges()} Q={q:.6f}")
    return 0


def layer_stats_rows(mln, assignments):
    rows = []
    for name, g in mln.layers.items():
        a = assignments[name]
        big = a.non_singleton()
        avg = sum(a.size(c) for c in big) / len(big) if big else 0.0
        rows.append((name, g.number_of_nodes(), g.number_of_edges(), len(big), a.n_communities, avg))
    return rows


def run_stats(args) -> int:
    mln = load_mln(args.config)
    assignments = _assignments(mln, mln.layer_names, args)
    print("#layer\tnodes\tedges\tcommunities(size>1/all)\tavg_community_size")
    for name, n, m, big, total, avg in layer_stats_rows(mln, assignments):
        print(f"{name}\t{n}\t{m}\t{big}/{total}\t{avg:.1f}")
    return 0


def run_bench(args) -> int:
    mln = load_mln(args.config)
    expr = parse_expression(args.expr, mln)
    start = time.perf_counter()
    for step in expr.steps:
        mln.link_arrays(step.left_layer, step.right_layer)
    index_seconds = time.perf_counter() - start
    onetime = {name: [] for name in expr.layers}
    recurring = [[] for _ in expr.steps]
    for _ in range(args.repeat):
        assignments = {}
        for name in expr.layers:
            start = time.perf_counter()
            assignments[name] = detect_layer_communities(mln.layers[name], args.seed)
            onetime[name].append(time.perf_counter() - start)
        result = evaluate_k_community(mln, expr, args.metric, args.algo, args.seed,
                                      assignments=assignments, hub_threshold=args.hub_threshold)
        for i, s in enumerate(result.steps):
            recurring[i].append(s.seconds)
    print(f"repeat={args.repeat}")
    print(f"load.link_index={index_seconds:.6f}")
    med_one = {name: statistics.median(v) for name, v in onetime.items()}
    for name, v in med_one.items():
        print(f"onetime.{name}={v:.6f}")
    med_rec = [statistics.median(v) for v in recurring]
    for i, v in enumerate(med_rec, start=1):
        print(f"recurring.step{i}={v:.6f}")
    one_max = max(med_one.values())
    rec_total = sum(med_rec)
    print(f"onetime.max={one_max:.6f}")
    print(f"recurring.total={rec_total:.6f}")
    print(f"ratio={rec_total / one_max if one_max else float('inf'):.6f}")
    return 0


def run_generate(args) -> int:
    from .synth import gen_planted_mln

    mln, _ = gen_planted_mln(args.layers, args.blocks, args.block_size, args.p_in, args.p_out,
                             args.coupling, args.seed)
    dump_mln(mln, args.out)
    print(f"config={Path(args.out) / 'config.yaml'}")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="hemln", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, seed=True):
        p.add_argument("--config", required=True, help="network config (YAML)")
        if seed:
            p.add_argument("--seed", type=int, default=DEFAULT_SEED)
        p.add_argument("--threads", type=_positive_int, default=os.cpu_count() or 1,
                       help="parallel per-layer community detection")

    def pipeline(p):
        p.add_argument("--expr", required=True, help='e.g. "A *[A,D] D"')
        p.add_argument("--metric", choices=METRICS, default="we")
        p.add_argument("--algo", choices=ALGORITHMS, default="mwm")
        p.add_argument("--hub-threshold", type=float, default=1.0,
                       help="hub cut-off as a multiple of mean intra-community degree")

    p = sub.add_parser("detect", help="evaluate a k-community expression")
    common(p)
    pipeline(p)
    p.add_argument("--out", required=True, help="tuple table output path")
    p.add_argument("--emit-edges", action="store_true", help="also write <out>.edges.tsv")
    p.add_argument("--cache", help="directory for reusable layer community files")
    p.set_defaults(func=run_detect)

    p = sub.add_parser("baseline", help="Louvain modularity of the aggregate graph")
    common(p)
    p.set_defaults(func=run_baseline)

    p = sub.add_parser("stats", help="per-layer statistics")
    common(p)
    p.add_argument("--cache")
    p.set_defaults(func=run_stats)

    p = sub.add_parser("bench", help="one-time vs recurring cost")
    common(p)
    pipeline(p)
    p.add_argument("--repeat", type=_positive_int, default=3)
    p.set_defaults(func=run_bench)

    p = sub.add_parser("generate", help="write a planted-partition network")
    p.add_argument("--out", required=True, help="output directory")
    p.add_argument("--layers", type=_positive_int, default=3)
    p.add_argument("--blocks", type=_positive_int, default=3)
    p.add_argument("--block-size", type=_positive_int, default=10)
    p.add_argument("--p-in", type=float, default=0.4)
    p.add_argument("--p-out", type=float, default=0.02)
    p.add_argument("--coupling", type=float, default=0.3)
    p.add_argument("--seed", type=int, default=DEFAULT_SEED)
    p.set_defaults(func=run_generate)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except HemlnError as exc:
        print(f"error: {type(exc).__name__}: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
