"""Reference implementations used to check the optimized search.

Nothing here shares code with :mod:`mwcycle.mwc` beyond the graph type, so
agreement between the two is meaningful.
"""

from __future__ import annotations

import csv
import io
import math
from dataclasses import dataclass
from heapq import heappop, heappush
from typing import Container, Optional, Sequence

import numpy as np

from .graph import CycleRecord, WeightedGraph, canonicalize_cycle
from .mwc import MwcResult, MwcStats

INF = math.inf
MAX_ENUMERATION_VERTICES = 14


def reference_dijkstra(
    graph: WeightedGraph,
    source: int,
    allowed: Optional[Container[int]] = None,
    weights: Optional[Sequence[float]] = None,
) -> dict:
    """Textbook single-source shortest paths; unreachable vertices are omitted."""
    dist = {source: 0.0}
    done = set()
    heap = [(0.0, source)]
    while heap:
        d, u = heappop(heap)
        if u in done:
            continue
        done.add(u)
        for v, eid, w in graph.adjacency[u]:
            if allowed is not None and v not in allowed:
                continue
            nd = d + (w if weights is None else weights[eid])
            if nd < dist.get(v, INF):
                dist[v] = nd
                heappush(heap, (nd, v))
    return dist


def _distance_avoiding(graph: WeightedGraph, u: int, v: int, skip: int, stats: MwcStats) -> float:
    dist = {u: 0.0}
    done = set()
    heap = [(0.0, u)]
    while heap:
        d, a = heappop(heap)
        if a in done or d != dist[a]:
            continue
        done.add(a)
        stats.argmin_ops += 1
        if a == v:
            return d
        for b, eid, w in graph.adjacency[a]:
            if eid == skip or b in done:
                continue
            stats.edges_scanned += 1
            nd = d + w
            if nd < dist.get(b, INF):
                dist[b] = nd
                stats.relaxations += 1
                heappush(heap, (nd, b))
    return INF


def rooted_girth(graph: WeightedGraph) -> MwcResult:
    """Baseline girth: min over edges (u, v) of d_{G-e}(u, v) + w(e).

    Runs one Dijkstra per edge, stopping as soon as ``v`` is finalized.
    ``stats.argmin_ops`` counts extractions across all runs.
    """
    stats = MwcStats()
    gamma = INF
    best_edge = None
    for eid, (u, v, w) in enumerate(graph.edges):
        stats.inner_searches += 1
        d = _distance_avoiding(graph, u, v, eid, stats)
        if d + w < gamma:
            gamma = d + w
            best_edge = eid
    witness = None
    if best_edge is not None:
        u, v, _ = graph.edges[best_edge]
        witness = canonicalize_cycle(_path_avoiding(graph, u, v, best_edge), graph)
    return MwcResult(gamma, witness, stats)


def _path_avoiding(graph: WeightedGraph, u: int, v: int, skip: int) -> list:
    dist = {u: 0.0}
    prev = {u: None}
    heap = [(0.0, u)]
    done = set()
    while heap:
        d, a = heappop(heap)
        if a in done:
            continue
        done.add(a)
        if a == v:
            break
        for b, eid, w in graph.adjacency[a]:
            if eid != skip and d + w < dist.get(b, INF):
                dist[b] = d + w
                prev[b] = a
                heappush(heap, (d + w, b))
    path = [v]
    while path[-1] != u:
        path.append(prev[path[-1]])
    return path


def _check_size(graph: WeightedGraph, max_vertices: int) -> None:
    if graph.vertex_count > max_vertices:
        raise ValueError(
            f"cycle enumeration is exponential; graph has {graph.vertex_count} vertices "
            f"(limit {max_vertices})"
        )


def enumerate_cycles(
    graph: WeightedGraph,
    max_vertices: int = MAX_ENUMERATION_VERTICES,
    *,
    max_length: float = INF,
    weights: Optional[Sequence[float]] = None,
) -> list:
    """Every simple cycle exactly once, as canonical records.

    DFS from each start vertex ``s`` through vertices larger than ``s`` only;
    a path closing back to ``s`` is emitted when its second vertex is smaller
    than its last, which fixes the orientation. With ``max_length`` only
    cycles no longer than it are returned (paths are cut once they exceed it,
    which needs nonnegative weights).
    """
    _check_size(graph, max_vertices)
    w = graph.weights if weights is None else weights
    adj = [[(b, eid) for b, eid, _ in graph.adjacency[a]] for a in range(graph.vertex_count)]
    out = []
    for s in range(graph.vertex_count):
        path = [s]
        on_path = {s}

        def dfs(a: int, length: float) -> None:
            for b, eid in adj[a]:
                total = length + w[eid]
                if total > max_length:
                    continue
                if b == s:
                    if len(path) >= 3 and path[1] < path[-1]:
                        out.append(canonicalize_cycle(path, graph, weights))
                elif b > s and b not in on_path:
                    path.append(b)
                    on_path.add(b)
                    dfs(b, total)
                    path.pop()
                    on_path.discard(b)

        dfs(s, 0.0)
    return [c for c in out if c.length <= max_length]


def brute_force_girth(graph: WeightedGraph, max_vertices: int = MAX_ENUMERATION_VERTICES) -> float:
    """Exhaustive branch-and-bound minimum over all simple cycles."""
    _check_size(graph, max_vertices)
    best = INF
    adj = graph.adjacency
    for s in range(graph.vertex_count):
        path = [s]
        on_path = {s}

        def dfs(a: int, length: float) -> None:
            nonlocal best
            for b, _, w in adj[a]:
                total = length + w
                if total >= best:
                    continue
                if b == s:
                    if len(path) >= 3:
                        best = total
                elif b > s and b not in on_path:
                    path.append(b)
                    on_path.add(b)
                    dfs(b, total)
                    path.pop()
                    on_path.discard(b)

        dfs(s, 0.0)
    return best


def minimum_cycles(graph: WeightedGraph, max_vertices: int = MAX_ENUMERATION_VERTICES) -> tuple:
    """``(gamma, cycles)`` with every minimum weight cycle, by enumeration."""
    gamma = brute_force_girth(graph, max_vertices)
    if gamma == INF:
        return INF, []
    cycles = enumerate_cycles(graph, max_vertices, max_length=gamma)
    return gamma, [c for c in cycles if c.length == gamma]


def composite_distance(graph: WeightedGraph, x: int, cycle: CycleRecord) -> float:
    dist = reference_dijkstra(graph, x)
    return min(dist.get(v, INF) for v in cycle.vertices) + cycle.length


@dataclass
class FFactorCurve:
    fractions: list
    removed: list

    def to_csv(self) -> str:
        buf = io.StringIO()
        writer = csv.writer(buf, lineterminator="\n")
        writer.writerow(["k", "fraction"])
        for k, f in enumerate(self.fractions):
            writer.writerow([k, repr(f)])
        return buf.getvalue()

    def area(self) -> float:
        """Trapezoid area under the curve over k / n in [0, 1]."""
        y = np.asarray(self.fractions, dtype=float)
        if len(y) < 2:
            return float(y.sum())
        return float(np.sum((y[1:] + y[:-1]) / 2) / (len(y) - 1))


def f_factor_simulation(graph: WeightedGraph) -> FFactorCurve:
    """Remaining edge fraction as vertices are removed, highest degree first.

    Degrees are recomputed after every removal; ties go to the smaller id.
    ``fractions[k]`` is the fraction left after ``k`` removals.
    """
    total = graph.edge_count
    if total == 0:
        raise ValueError("f-factor needs at least one edge")
    nbrs = [set(graph.neighbors(v)) for v in range(graph.vertex_count)]
    alive = set(range(graph.vertex_count))
    remaining = total
    fractions = [remaining / total]
    removed = []
    while alive:
        v = min(alive, key=lambda a: (-len(nbrs[a]), a))
        alive.discard(v)
        for b in nbrs[v]:
            nbrs[b].discard(v)
        remaining -= len(nbrs[v])
        nbrs[v] = set()
        removed.append(v)
        fractions.append(remaining / total)
    return FFactorCurve(fractions, removed)


def least_distance_modulus(rows: Sequence[Sequence[int]], edge_count: int) -> tuple:
    """Exact ``min ||rho||^2`` subject to every row summing to at least 1.

    Solved as a least-distance program through nonnegative least squares:
    with ``E = [N.T; 1]`` and ``f = e_last``, the NNLS residual ``r = E u - f``
    gives ``rho = -r[:-1] / r[-1]``. Returns ``(modulus, rho)``.
    """
    from scipy.optimize import nnls

    dense = np.zeros((len(rows), edge_count))
    for i, row in enumerate(rows):
        dense[i, list(row)] = 1.0
    E = np.vstack([dense.T, np.ones((1, len(rows)))])
    f = np.zeros(edge_count + 1)
    f[-1] = 1.0
    u, _ = nnls(E, f, maxiter=50 * E.shape[1] + 100)
    r = E @ u - f
    if abs(r[-1]) < 1e-14:
        raise ValueError("constraint system is infeasible")
    rho = -r[:-1] / r[-1]
    return float(rho @ rho), rho


def projected_gradient_modulus(
    rows: Sequence[Sequence[int]], edge_count: int, tol: float = 1e-11, max_iters: int = 200000
) -> float:
    """Dual projected gradient ascent; slow but shares nothing with Hildreth."""
    N = np.zeros((len(rows), edge_count))
    for i, row in enumerate(rows):
        N[i, list(row)] = 1.0
    H = N @ N.T / 2.0
    step = 1.0 / np.linalg.eigvalsh(H)[-1]
    lam = np.zeros(len(rows))
    for _ in range(max_iters):
        grad = 1.0 - H @ lam
        new = np.maximum(0.0, lam + step * grad)
        if np.max(np.abs(new - lam)) < tol:
            lam = new
            break
        lam = new
    rho = N.T @ lam / 2.0
    return float(rho @ rho)
