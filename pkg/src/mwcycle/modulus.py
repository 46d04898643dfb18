"""Loop modulus (p=2) by constraint generation.

Start from a small set of cycles (greedily chosen triangles, or one shortest
hop cycle when there are none), solve the restricted quadratic program, then
repeatedly search for cycles whose density-length falls below ``1 - epsilon``
and add the shortest ones. The cycle search is the truncated Dijkstra engine
of :mod:`mwcycle.mwc` with the density as edge weights. Searches may be
confined to a hop ball around the cycles added last; a confined search that
finds nothing hands over to the full graph, and convergence is only declared
after a full-graph search comes back empty.
"""

from __future__ import annotations

import json
import logging
import time
from dataclasses import dataclass, field
from typing import Container, Iterable, Optional, Sequence

import numpy as np

from .graph import CycleRecord, WeightedGraph, canonicalize_cycle
from .mwc import find_mwc, inner_search
from .pruning import PruneConfig, PruneState, expire, install, step
from .qp import ConstraintMatrix, QpSolution, solve

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ModulusConfig:
    """``max_iters`` and ``init_target`` default to ``10 * |V|`` and
    ``min(|E| // 3, 50)`` (at least 1) when left as None."""

    epsilon: float = 1e-6
    max_iters: Optional[int] = None
    init_target: Optional[int] = None
    cycles_per_iter: int = 5
    prune: PruneConfig = field(default_factory=lambda: PruneConfig(True, 5, 3, 0.3))
    qp_tolerance: float = 1e-8
    qp_max_iters: Optional[int] = None

    def __post_init__(self):
        if not 0 < self.epsilon < 1:
            raise ValueError("epsilon must be in (0, 1)")
        if self.cycles_per_iter < 1:
            raise ValueError("cycles_per_iter must be >= 1")
        if self.max_iters is not None and self.max_iters < 0:
            raise ValueError("max_iters must be >= 0")
        if self.init_target is not None and self.init_target < 1:
            raise ValueError("init_target must be >= 1")
        if not self.qp_tolerance > 0:
            raise ValueError("qp_tolerance must be positive")

    def resolved(self, graph: WeightedGraph) -> tuple[int, int]:
        iters = 10 * graph.vertex_count if self.max_iters is None else self.max_iters
        target = self.init_target
        if target is None:
            target = max(1, min(graph.edge_count // 3, 50))
        return iters, target


@dataclass
class ModulusResult:
    rho: np.ndarray
    modulus: float
    constraints: list
    qp_solves: int
    iterations: int
    converged: bool
    qp_converged: bool = True
    trace: list = field(default_factory=list)
    timing: dict = field(default_factory=dict)
    initial_constraints: int = 0

    def to_dict(self, graph: WeightedGraph) -> dict:
        labels = graph.labels
        return {
            "modulus": self.modulus,
            "rho": [[labels[u], labels[v], float(r)] for (u, v, _), r in zip(graph.edges, self.rho)],
            "constraints": [[labels[v] for v in c.vertices] for c in self.constraints],
            "qp_solves": self.qp_solves,
            "iterations": self.iterations,
            "converged": self.converged,
            "qp_converged": self.qp_converged,
            "trace": self.trace,
        }

    def to_json(self, graph: WeightedGraph) -> str:
        return json.dumps(self.to_dict(graph), indent=2)


# ------------------------------------------------------------ preprocessing


def find_triangles(graph: WeightedGraph) -> list:
    """Every 3-cycle once, found as ``u < v < z``."""
    nbrs = [set(graph.neighbors(v)) for v in range(graph.vertex_count)]
    out = []
    for u in range(graph.vertex_count):
        for v in sorted(b for b in nbrs[u] if b > u):
            for z in sorted(b for b in nbrs[u] & nbrs[v] if b > v):
                out.append(canonicalize_cycle((u, v, z), graph))
    return out


def shortest_hop_cycle(graph: WeightedGraph) -> Optional[CycleRecord]:
    """A cycle with the fewest edges, or None for a forest."""
    result = find_mwc(graph, weights=[1.0] * graph.edge_count)
    return result.witness


def greedy_select(candidates: Sequence[CycleRecord], target: int, graph: WeightedGraph) -> list:
    """Pick cycles covering the most not-yet-covered edges.

    Ties go to the larger degree sum over the cycle's vertices, then to the
    canonical vertex order.
    """
    if not candidates:
        raise ValueError("greedy_select needs at least one candidate")
    pool = sorted(candidates, key=lambda c: (-sum(graph.degree(v) for v in c.vertices), c.vertices))
    covered: set = set()
    chosen = []
    taken = [False] * len(pool)
    while len(chosen) < target and len(chosen) < len(pool):
        best, best_gain = -1, -1
        for i, c in enumerate(pool):
            if taken[i]:
                continue
            gain = sum(1 for e in c.edge_ids if e not in covered)
            if gain > best_gain:
                best, best_gain = i, gain
        taken[best] = True
        chosen.append(pool[best])
        covered.update(pool[best].edge_ids)
    return chosen


# ---------------------------------------------------------- violated cycles


def find_top_k_violated(
    graph: WeightedGraph,
    rho: Sequence[float],
    k: int,
    threshold: float,
    scope: Optional[Container[int]] = None,
    exclude: Optional[Container] = None,
) -> list:
    """Up to ``k`` shortest detected cycles of density-length below ``threshold``.

    Runs a truncated search from every vertex of ``scope`` (all vertices when
    None) with ``rho`` as weights and a fixed cutoff; once ``k`` cycles are in
    hand the cutoff shrinks to the ``k``-th best length. Cycles whose edge ids
    are in ``exclude`` are skipped. Lengths are recomputed on the full graph.
    Returns ``[(record, length), ...]`` in ascending order.

    If any cycle inside ``scope`` is below the threshold the result is not
    empty: the search from one of its vertices closes a cycle no longer than
    it.
    """
    if k < 1:
        raise ValueError("k must be >= 1")
    if not 0 < threshold <= 1:
        raise ValueError("threshold must be in (0, 1]")
    rho = np.asarray(rho, dtype=float)
    if rho.shape != (graph.edge_count,):
        raise ValueError("rho needs one value per edge")
    if np.any(rho < 0):
        raise ValueError("rho must be nonnegative")
    weights = rho.tolist()
    exclude = exclude if exclude is not None else ()
    found: dict = {}
    cutoff = threshold
    roots = range(graph.vertex_count) if scope is None else sorted(v for v in range(graph.vertex_count) if v in scope)
    for x in roots:
        _, _, detected = inner_search(
            graph, x, view=scope, weights=weights, cutoff=cutoff, collect="all", record_below=cutoff
        )
        for rec in detected:
            if rec.vertices in found or rec.edge_ids in exclude:
                continue
            found[rec.vertices] = rec
        if len(found) >= k:
            lengths = sorted(r.length for r in found.values())
            cutoff = min(cutoff, lengths[k - 1])
    out = []
    for rec in found.values():
        full = canonicalize_cycle(rec.vertices, graph, weights)
        length = float(rho[list(full.edge_ids)].sum())
        if length < threshold:
            out.append((full, length))
    out.sort(key=lambda item: (item[1], item[0].vertices))
    return out[:k]


# -------------------------------------------------------------- main loop


def compute_modulus(graph: WeightedGraph, config: Optional[ModulusConfig] = None) -> ModulusResult:
    config = config or ModulusConfig()
    max_iters, target = config.resolved(graph)
    prune = config.prune
    threshold = 1.0 - config.epsilon
    t0 = time.perf_counter()
    timing = {"search": 0.0, "qp": 0.0}

    candidates = find_triangles(graph)
    if not candidates:
        hop = shortest_hop_cycle(graph)
        candidates = [hop] if hop is not None else []
    if not candidates:
        timing["total"] = time.perf_counter() - t0
        return ModulusResult(np.zeros(graph.edge_count), 0.0, [], 0, 0, True, timing=timing)

    constraints = greedy_select(candidates, target, graph)
    initial = len(constraints)
    matrix = ConstraintMatrix((c.edge_ids for c in constraints), graph.edge_count)
    t = time.perf_counter()
    sol = solve(matrix, tolerance=config.qp_tolerance, max_iters=config.qp_max_iters)
    timing["qp"] += time.perf_counter() - t
    qp_solves = 1
    qp_ok = sol.converged
    keys = set(matrix.keys)
    pstate = PruneState()
    trace: list = []
    converged = False
    k = 0

    while k < max_iters:
        k += 1
        scope, pstate = step(pstate, prune)
        t = time.perf_counter()
        violated = find_top_k_violated(
            graph, sol.rho, config.cycles_per_iter, threshold, scope=scope, exclude=keys
        )
        timing["search"] += time.perf_counter() - t
        entry = {
            "iteration": k,
            "scope": graph.vertex_count if scope is None else len(scope),
            "min_length": violated[0][1] if violated else None,
            "added": len(violated),
        }
        if not violated:
            entry["modulus"] = sol.modulus
            trace.append(entry)
            if scope is None:
                converged = True
                break
            pstate = expire(pstate, prune)
            continue
        new = [rec for rec, _ in violated]
        constraints.extend(new)
        keys.update(rec.edge_ids for rec in new)
        matrix = matrix.extended(rec.edge_ids for rec in new)
        t = time.perf_counter()
        sol = solve(matrix, warm=sol, tolerance=config.qp_tolerance, max_iters=config.qp_max_iters)
        timing["qp"] += time.perf_counter() - t
        qp_solves += 1
        qp_ok = qp_ok and sol.converged
        entry["modulus"] = sol.modulus
        trace.append(entry)
        last = {v for rec in new for v in rec.vertices}
        pstate = install(pstate, graph, last, prune)

    if not converged:
        logger.warning("modulus iteration limit %d reached before convergence", max_iters)
    timing["total"] = time.perf_counter() - t0
    return ModulusResult(
        rho=sol.rho,
        modulus=sol.modulus,
        constraints=constraints,
        qp_solves=qp_solves,
        iterations=k,
        converged=converged,
        qp_converged=qp_ok,
        trace=trace,
        timing=timing,
        initial_constraints=initial,
    )


def full_constraint_modulus(graph: WeightedGraph, cycles: Iterable[CycleRecord], tolerance: float = 1e-9) -> QpSolution:
    """Solve the QP over an explicit cycle list (for small graphs)."""
    matrix = ConstraintMatrix((c.edge_ids for c in cycles), graph.edge_count)
    return solve(matrix, tolerance=tolerance, max_iters=10**6)
