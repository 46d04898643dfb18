"""Benchmark suites that write plot-ready CSV files."""

from __future__ import annotations

import csv
import time
from pathlib import Path
from typing import Callable, Optional

from .generators import generate, generate_with_meta, parse_graph_spec
from .graph import WeightedGraph
from .modulus import ModulusConfig, compute_modulus
from .mwc import find_mwc
from .oracles import f_factor_simulation, rooted_girth
from .pruning import PruneConfig

FFACTOR_SPECS = {
    "er": "er:100:0.05:seed=1",
    "ba": "ba:100:2:seed=1",
    "ws": "ws:100:4:0.1:seed=1",
    "complete": "complete:20",
}
MODULUS_TABLE_COLUMNS = ["method", "qp_solves", "total_time_s", "modulus", "constraints", "iterations", "converged"]


def _write(path: Path, header: list, rows: list) -> Path:
    path.parent.mkdir(parents=True, exist_ok=True)
    with open(path, "w", newline="") as fh:
        writer = csv.writer(fh, lineterminator="\n")
        writer.writerow(header)
        writer.writerows(rows)
    return path


def grid_rows(sizes=range(3, 13)) -> list:
    rows = []
    for d in sizes:
        g = generate(f"grid:{d}")
        ours = find_mwc(g, collect_witness=False)
        base = rooted_girth(g)
        ratio = ours.stats.argmin_ops / base.stats.argmin_ops
        rows.append([d, ours.stats.argmin_ops, base.stats.argmin_ops, ratio, ours.gamma])
    return rows


def bench_grids(out: Path) -> list:
    rows = grid_rows()
    return [_write(out / "grids.csv", ["d", "ops_alg1", "ops_rooted", "ratio", "gamma"], rows)]


def bench_ffactor(out: Path) -> list:
    paths = []
    for name, spec in FFACTOR_SPECS.items():
        curve = f_factor_simulation(generate(spec))
        rows = [[k, f] for k, f in enumerate(curve.fractions)]
        paths.append(_write(out / f"ffactor_{name}.csv", ["k", "fraction"], rows))
    return paths


def light_tree_rows(seeds=range(10), n: int = 100) -> list:
    rows = []
    for seed in seeds:
        g, meta = generate_with_meta(parse_graph_spec(f"light-tree:{n}:seed={seed}"))
        ours = find_mwc(g, collect_witness=False)
        base = rooted_girth(g)
        rows.append([seed, ours.stats.argmin_ops, base.stats.argmin_ops, ours.gamma, meta["expected_gamma"]])
    return rows


def bench_light_tree(out: Path) -> list:
    rows = light_tree_rows()
    return [_write(out / "light_tree.csv", ["seed", "ops_alg1", "ops_rooted", "gamma", "expected_gamma"], rows)]


def modulus_comparison(graph: WeightedGraph, optimized: Optional[ModulusConfig] = None) -> list:
    """Table-style rows for the optimized pipeline and a one-cycle, unpruned baseline."""
    configs = {
        "optimized": optimized or ModulusConfig(),
        "baseline": ModulusConfig(cycles_per_iter=1, prune=PruneConfig(enabled=False)),
    }
    rows = []
    for name, cfg in configs.items():
        t = time.perf_counter()
        res = compute_modulus(graph, cfg)
        rows.append([name, res.qp_solves, time.perf_counter() - t, res.modulus, len(res.constraints), res.iterations, res.converged])
    return rows


def bench_modulus(out: Path) -> list:
    rows = modulus_comparison(generate("proximity:324:seed=1"))
    return [_write(out / "modulus.csv", MODULUS_TABLE_COLUMNS, rows)]


SUITES: dict[str, Callable[[Path], list]] = {
    "grids": bench_grids,
    "ffactor": bench_ffactor,
    "light-tree": bench_light_tree,
    "modulus": bench_modulus,
}


def run_suite(name: str, out_dir) -> list:
    if name not in SUITES:
        raise KeyError(f"unknown bench suite {name!r}; choose from {', '.join(SUITES)}")
    return SUITES[name](Path(out_dir))
