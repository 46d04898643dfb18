"""Command line front end: ``mwcycle girth|modulus|gen|bench``.

Exit codes: 0 success, 1 input or usage error, 2 forest with
``--require-cycle``, 3 modulus run that did not converge.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
import time
from dataclasses import asdict
from pathlib import Path
from typing import Optional, Sequence

from .bench import SUITES, run_suite
from .generators import GraphSpecError, generate_with_meta, parse_graph_spec
from .graph import GraphError, WeightedGraph, dumps_graph, read_graph
from .modulus import ModulusConfig, ModulusResult, compute_modulus, full_constraint_modulus
from .mwc import find_mwc
from .oracles import enumerate_cycles, rooted_girth
from .pruning import PruneConfig

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_FOREST = 2
EXIT_NOT_CONVERGED = 3


class CliError(Exception):
    pass


def fmt(x: float) -> str:
    return format(x, ".12g")


def _json_number(x: float):
    return None if math.isinf(x) else x


def _add_input(p: argparse.ArgumentParser) -> None:
    p.add_argument("input", nargs="?", help="graph file (edge list, or JSON when it ends in .json)")
    p.add_argument("--gen", metavar="SPEC", help="generate the graph inline, e.g. grid:5 or er:100:0.05:seed=3")
    p.add_argument("--format", choices=["edge-list", "json"], help="input format (default from extension)")
    p.add_argument("--report", metavar="PATH", help="write a JSON run report")
    p.add_argument("--strict", action="store_true", help="reject randomized generators without a seed")


def _add_prune(p: argparse.ArgumentParser, default: bool) -> None:
    p.add_argument("--prune", dest="prune", action="store_true", default=default, help="search hop-limited views")
    p.add_argument("--no-prune", dest="prune", action="store_false")
    p.add_argument("--prune-dist", type=int, default=3, metavar="HOPS")
    p.add_argument("--prune-interval", type=int, default=5, metavar="STEPS")
    p.add_argument("--prune-min-frac", type=float, default=0.3, metavar="FRAC")


def _prune_config(args) -> PruneConfig:
    try:
        return PruneConfig(args.prune, args.prune_interval, args.prune_dist, args.prune_min_frac)
    except ValueError as exc:
        raise CliError(str(exc)) from None


class _Parser(argparse.ArgumentParser):
    # usage errors share exit code 1 with input errors; 2 means "forest"
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="mwcycle", description="Minimum weight cycles and loop modulus.")
    sub = parser.add_subparsers(dest="command", required=True)

    g = sub.add_parser("girth", help="weighted girth (minimum weight cycle length)")
    _add_input(g)
    g.add_argument("--no-discard", dest="discarding", action="store_false", help="disable vertex discarding")
    _add_prune(g, default=False)
    g.add_argument("--order", choices=["id", "degree-desc"], default="id", help="root order")
    g.add_argument("--witness", action="store_true", help="print a minimum cycle")
    g.add_argument("--compare", choices=["rooted"], help="also run the per-edge baseline")
    g.add_argument("--require-cycle", action="store_true", help="exit 2 when the graph is a forest")

    m = sub.add_parser("modulus", help="p=2 loop modulus")
    _add_input(m)
    m.add_argument("--epsilon", type=float, default=1e-6)
    m.add_argument("--max-iters", type=int)
    m.add_argument("--init-target", type=int)
    m.add_argument("--k-add", type=int, default=5, help="cycles added per iteration")
    m.add_argument("--qp-tol", type=float, default=1e-8)
    _add_prune(m, default=True)
    m.add_argument("--oracle", action="store_true", help="also solve over all enumerated cycles (small graphs)")
    m.add_argument("--compare", choices=["baseline"], help="also run one cycle per iteration without pruning")

    gen = sub.add_parser("gen", help="write a generated graph")
    gen.add_argument("spec")
    gen.add_argument("-o", "--output", metavar="PATH", help="output file (stdout when omitted)")
    gen.add_argument("--format", choices=["edge-list", "json"], help="output format (default from extension)")
    gen.add_argument("--meta", metavar="PATH", help="generator metadata JSON (default: OUTPUT.meta.json when -o is given)")
    gen.add_argument("--strict", action="store_true")

    b = sub.add_parser("bench", help="run a benchmark suite and write CSV files")
    b.add_argument("suite", help=f"one of: {', '.join(SUITES)}")
    b.add_argument("-o", "--output-dir", default="bench_out", metavar="DIR")
    return parser


def _load(args) -> tuple[WeightedGraph, dict]:
    if (args.input is None) == (args.gen is None):
        raise CliError("give exactly one of an input file or --gen")
    if args.gen is not None:
        spec = parse_graph_spec(args.gen)
        if args.strict and spec.is_random and spec.seed is None:
            raise CliError(f"--strict: generator spec {args.gen!r} needs an explicit seed")
        graph, _ = generate_with_meta(spec)
        return graph, {"gen": str(spec)}
    return read_graph(args.input, args.format), {"input": args.input}


def _write_report(path: Optional[str], report: dict) -> None:
    if path:
        Path(path).write_text(json.dumps(report, indent=2, sort_keys=True) + "\n")


def cmd_girth(args, argv: Sequence[str]) -> int:
    graph, source = _load(args)
    prune = _prune_config(args)
    t = time.perf_counter()
    result = find_mwc(graph, discarding=args.discarding, pruning=prune, order=args.order)
    wall = time.perf_counter() - t
    labels = graph.labels
    print(f"gamma = {fmt(result.gamma)}")
    witness = None if result.witness is None else [labels[v] for v in result.witness.vertices]
    if args.witness:
        print("cycle: " + (" ".join(witness) if witness else "none"))
    payload = {
        "gamma": _json_number(result.gamma),
        "is_forest": result.is_forest,
        "witness": witness,
        "discarded": [labels[v] for v in sorted(result.discarded)],
    }
    stats = {"alg1": result.stats.as_dict()}
    if args.compare == "rooted":
        base = rooted_girth(graph)
        ratio = result.stats.argmin_ops / base.stats.argmin_ops if base.stats.argmin_ops else math.nan
        print(f"rooted gamma = {fmt(base.gamma)}")
        print(f"argmin ops: alg1 = {result.stats.argmin_ops}, rooted = {base.stats.argmin_ops}, ratio = {ratio:.4f}")
        payload["rooted_gamma"] = _json_number(base.gamma)
        stats["rooted"] = base.stats.as_dict()
    report = {
        "command": list(argv),
        "config": {
            **source,
            "discarding": args.discarding,
            "prune": asdict(prune),
            "order": args.order,
        },
        "stats": stats,
        "result": payload,
        "wall_time": wall,
    }
    _write_report(args.report, report)
    if args.require_cycle and result.is_forest:
        print("error: graph has no cycle", file=sys.stderr)
        return EXIT_FOREST
    return EXIT_OK


def _print_modulus(tag: str, res: ModulusResult) -> None:
    print(f"{tag}modulus = {fmt(res.modulus)}")
    print(f"{tag}constraints = {len(res.constraints)}")
    print(f"{tag}qp_solves = {res.qp_solves}")
    print(f"{tag}iterations = {res.iterations}")
    print(f"{tag}converged = {str(res.converged).lower()}")


def cmd_modulus(args, argv: Sequence[str]) -> int:
    graph, source = _load(args)
    try:
        config = ModulusConfig(
            epsilon=args.epsilon,
            max_iters=args.max_iters,
            init_target=args.init_target,
            cycles_per_iter=args.k_add,
            prune=_prune_config(args),
            qp_tolerance=args.qp_tol,
        )
    except ValueError as exc:
        raise CliError(str(exc)) from None
    res = compute_modulus(graph, config)
    _print_modulus("", res)
    report = {
        "command": list(argv),
        "config": {**source, **asdict(config)},
        "result": res.to_dict(graph),
        "wall_time": res.timing,
    }
    if args.oracle:
        cycles = enumerate_cycles(graph)
        if cycles:
            oracle = full_constraint_modulus(graph, cycles).modulus
        else:
            oracle = 0.0
        print(f"oracle modulus = {fmt(oracle)}")
        report["oracle"] = {"modulus": oracle, "cycles": len(cycles)}
    if args.compare == "baseline":
        base = compute_modulus(graph, ModulusConfig(epsilon=args.epsilon, cycles_per_iter=1, prune=PruneConfig(False), qp_tolerance=args.qp_tol))
        _print_modulus("baseline ", base)
        report["baseline"] = base.to_dict(graph)
        report["wall_time"] = {"optimized": res.timing, "baseline": base.timing}
    _write_report(args.report, report)
    if not res.converged:
        print("error: modulus did not converge; report holds the last iterate", file=sys.stderr)
        return EXIT_NOT_CONVERGED
    return EXIT_OK


def cmd_gen(args) -> int:
    spec = parse_graph_spec(args.spec)
    if args.strict and spec.is_random and spec.seed is None:
        raise CliError(f"--strict: generator spec {args.spec!r} needs an explicit seed")
    graph, meta = generate_with_meta(spec)
    fmt_name = args.format or ("json" if (args.output or "").endswith(".json") else "edge-list")
    text = dumps_graph(graph, fmt_name)
    if args.output:
        Path(args.output).write_text(text)
    else:
        sys.stdout.write(text)
    meta_path = args.meta or (args.output + ".meta.json" if args.output else None)
    if meta_path:
        Path(meta_path).write_text(json.dumps(meta, indent=2, sort_keys=True) + "\n")
    return EXIT_OK


def cmd_bench(args) -> int:
    if args.suite not in SUITES:
        raise CliError(f"unknown bench suite {args.suite!r}; choose from {', '.join(SUITES)}")
    for path in run_suite(args.suite, args.output_dir):
        print(path)
    return EXIT_OK


def main(argv: Optional[Sequence[str]] = None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    try:
        args = build_parser().parse_args(argv)
    except SystemExit as exc:
        # --help exits 0, usage errors exit 1
        return int(exc.code or 0)
    try:
        if args.command == "girth":
            return cmd_girth(args, argv)
        if args.command == "modulus":
            return cmd_modulus(args, argv)
        if args.command == "gen":
            return cmd_gen(args)
        return cmd_bench(args)
    except (CliError, GraphError, GraphSpecError, OSError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
