"""Minimum weight cycle by composite-distance minimization.

The outer loop runs a truncated Dijkstra search from each still-active root.
A search stops expanding once no tentative distance is below half of the best
cycle length seen so far, closes cycles on edges between two finalized
vertices, and tracks the detected cycle of least composite distance (distance
from the root plus cycle length).

Vertex discarding uses a certificate that holds under the truncation: after
the search has finalized every vertex closer than ``reach``, a vertex ``z``
lies on no cycle of length at most ``gamma`` when

    delta(z) < min(reach - gamma / 2, (walk_min - gamma) / 2)

where ``walk_min`` is the least closed-walk length ``delta(y) + delta(z) +
w(y, z)`` over detected cycles. The search may run a little past ``gamma / 2``
to make that radius useful.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from heapq import heappop, heappush
from typing import Container, Optional, Sequence

from .graph import CycleRecord, WeightedGraph, canonicalize_cycle
from .pruning import PruneConfig, PruneState, expire, install, step

INF = math.inf


@dataclass
class MwcStats:
    argmin_ops: int = 0
    relaxations: int = 0
    edges_scanned: int = 0
    cycles_detected: int = 0
    vertices_discarded: int = 0
    inner_searches: int = 0
    pruned_searches: int = 0
    requeued_roots: int = 0

    def as_dict(self) -> dict:
        return dict(self.__dict__)


@dataclass
class MwcSearchState:
    """Per-root search state.

    ``pred`` uses -1 for "no predecessor". ``order`` lists finalized vertices
    in extraction order (the set Q); ``touched`` lists every vertex that got a
    finite tentative distance.
    """

    root: int
    delta: list
    pred: list
    depth: list
    finalized: list
    order: list = field(default_factory=list)
    touched: list = field(default_factory=list)
    d_plus_min: float = INF
    dist_to_cycle: float = INF
    ell_best: float = INF
    best_cycle: Optional[CycleRecord] = None
    gamma: float = INF
    walk_min: float = INF
    reach: float = 0.0
    scope: Optional[frozenset] = None
    boundary_hit: bool = False

    @property
    def Q(self) -> set:
        return set(self.order)


@dataclass
class CycleEvent:
    y: int
    z: int
    lca: int
    length: float
    dist_to_cycle: float
    composite: float
    gamma: float
    vertices: Optional[tuple] = None


class SearchObserver:
    """Instrumentation hook; subclass and override what you need."""

    def on_extract(self, state: MwcSearchState, y: int) -> None:
        pass

    def on_cycle(self, state: MwcSearchState, event: CycleEvent) -> None:
        pass

    def on_search_end(self, state: MwcSearchState) -> None:
        pass

    def on_discard(self, state: MwcSearchState, removed: list) -> None:
        pass


@dataclass
class ActiveSet:
    active: set
    processed: set = field(default_factory=set)

    @classmethod
    def full(cls, n: int) -> "ActiveSet":
        return cls(set(range(n)))


@dataclass
class MwcResult:
    gamma: float
    witness: Optional[CycleRecord]
    stats: MwcStats
    discarded: frozenset = frozenset()
    gamma_trace: list = field(default_factory=list)

    @property
    def is_forest(self) -> bool:
        return self.gamma == INF


def _lca(pred: Sequence[int], depth: Sequence[int], a: int, b: int) -> int:
    while depth[a] > depth[b]:
        a = pred[a]
    while depth[b] > depth[a]:
        b = pred[b]
    while a != b:
        a = pred[a]
        b = pred[b]
    return a


def lca(state: MwcSearchState, y: int, z: int) -> int:
    """Deepest common vertex of the predecessor chains of ``y`` and ``z``."""
    return _lca(state.pred, state.depth, y, z)


def _trace_cycle(pred: Sequence[int], y: int, z: int, p: int) -> list:
    left = [y]
    while left[-1] != p:
        left.append(pred[left[-1]])
    right = [z]
    while right[-1] != p:
        right.append(pred[right[-1]])
    return left[::-1] + right[:-1]


def inner_search(
    graph: WeightedGraph,
    x: int,
    gamma_in: float = INF,
    view: Optional[Container[int]] = None,
    *,
    weights: Optional[Sequence[float]] = None,
    cutoff: Optional[float] = None,
    collect: str = "all",
    record_below: float = INF,
    outer: Optional[Container[int]] = None,
    observer: Optional[SearchObserver] = None,
    stats: Optional[MwcStats] = None,
    discard_reach: Optional[float] = None,
) -> tuple[float, MwcSearchState, list]:
    """Truncated Dijkstra from ``x`` that detects cycles on the way.

    Only vertices in ``view`` are visited (all vertices when None). Expansion
    continues while some unfinalized vertex has tentative distance below
    ``gamma / 2``, with ``gamma`` updated live; a fixed ``cutoff`` replaces
    ``gamma`` in that test when given. ``weights`` overrides the edge weights
    by edge id and may contain zeros.

    ``collect`` selects which detected cycles are rebuilt and returned:
    ``"all"`` (every distinct cycle shorter than ``record_below``), ``"best"``
    (the shortest one, only if it beats ``gamma_in``) or ``"none"``.

    When ``outer`` is given, ``state.boundary_hit`` reports whether the search
    scanned an edge to a vertex of ``outer`` outside ``view``; if not, the
    restricted search behaved exactly like a search over ``outer``.

    ``discard_reach`` (a fraction of gamma) lets the search continue past
    ``gamma / 2`` by up to that much while it can still grow the discard
    radius; ``state.reach`` records the distance below which every vertex
    was finalized.

    Returns ``(gamma_out, state, detected)``.
    """
    n = graph.vertex_count
    adj = graph.adjacency
    if stats is None:
        stats = MwcStats()
    delta = [INF] * n
    pred = [-1] * n
    depth = [0] * n
    done = [False] * n
    state = MwcSearchState(x, delta, pred, depth, done)
    if observer is not None and view is not None:
        state.scope = frozenset(v for v in range(n) if v in view)
    order = state.order
    touched = state.touched
    stats.inner_searches += 1

    delta[x] = 0.0
    touched.append(x)
    heap = [(0.0, x)]
    gamma = gamma_in
    d_plus_min = INF
    best_triple = None
    best_len = INF
    plus_triple = None
    recorded = []
    want_all = collect == "all"
    argmin = relax = scanned = ncycles = 0
    boundary_hit = False

    walk_min = INF
    while heap:
        dy, y = heap[0]
        if done[y] or dy != delta[y]:
            heappop(heap)
            continue
        limit = gamma if cutoff is None else cutoff
        if not dy < limit / 2:
            if discard_reach is None or cutoff is not None:
                break
            extra = min((walk_min - gamma) / 2, discard_reach * gamma)
            if not dy < gamma / 2 + extra:
                break
        heappop(heap)
        done[y] = True
        order.append(y)
        argmin += 1
        py = pred[y]
        for z, eid, w in adj[y]:
            if view is not None and z not in view:
                if outer is not None and z in outer:
                    boundary_hit = True
                continue
            scanned += 1
            if weights is not None:
                w = weights[eid]
            if not done[z]:
                nd = dy + w
                if nd < delta[z]:
                    if delta[z] == INF:
                        touched.append(z)
                    delta[z] = nd
                    pred[z] = y
                    depth[z] = depth[y] + 1
                    heappush(heap, (nd, z))
                    relax += 1
            elif z != py:
                p = _lca(pred, depth, y, z)
                dp = delta[p]
                walk = dy + delta[z] + w
                ell = walk - 2 * dp
                comp = dp + ell
                ncycles += 1
                if walk < walk_min:
                    walk_min = walk
                if ell < gamma:
                    gamma = ell
                if ell < best_len:
                    best_len = ell
                    best_triple = (y, z, p)
                if comp < d_plus_min:
                    d_plus_min = comp
                    state.dist_to_cycle = dp
                    state.ell_best = ell
                    plus_triple = (y, z, p)
                if want_all and ell < record_below:
                    recorded.append((y, z, p))
                if observer is not None:
                    verts = tuple(_trace_cycle(pred, y, z, p))
                    observer.on_cycle(state, CycleEvent(y, z, p, ell, dp, comp, gamma, verts))
        if observer is not None:
            state.gamma = gamma
            state.d_plus_min = d_plus_min
            observer.on_extract(state, y)

    stats.argmin_ops += argmin
    stats.relaxations += relax
    stats.edges_scanned += scanned
    stats.cycles_detected += ncycles
    state.d_plus_min = d_plus_min
    state.gamma = gamma
    state.walk_min = walk_min
    state.boundary_hit = boundary_hit
    state.reach = INF
    while heap:
        dy, y = heap[0]
        if done[y] or dy != delta[y]:
            heappop(heap)
            continue
        state.reach = dy
        break

    def build(triple):
        y, z, p = triple
        return canonicalize_cycle(
            _trace_cycle(pred, y, z, p), graph, weights, root=x, dist_to_cycle=delta[p]
        )

    if plus_triple is not None and collect != "none":
        state.best_cycle = build(plus_triple)

    detected: list = []
    if want_all:
        seen = set()
        for triple in recorded:
            rec = build(triple)
            if rec.vertices not in seen:
                seen.add(rec.vertices)
                detected.append(rec)
    elif collect == "best" and best_triple is not None and best_len < gamma_in:
        detected.append(build(best_triple))

    if observer is not None:
        observer.on_search_end(state)
    return gamma, state, detected


def discard_radius(state: MwcSearchState, gamma: float) -> float:
    """Distance below which explored vertices lie on no cycle of length <= ``gamma``.

    A cycle that leaves the finalized region has a vertex at distance at
    least ``reach``, so all its vertices are at least ``reach - gamma / 2``
    away. A cycle inside it has a non-tree edge whose closed walk through the
    root is at most twice the cycle's distance plus its length, which bounds
    that distance below by ``(walk_min - gamma) / 2``.
    """
    return min(state.reach - gamma / 2, (state.walk_min - gamma) / 2)


def apply_discarding(
    state: MwcSearchState,
    gamma: float,
    active: ActiveSet,
    observer: Optional[SearchObserver] = None,
    rule: str = "certified",
) -> list:
    """Drop explored vertices that lie on no minimum cycle; returns them.

    ``gamma`` must be an upper bound on the minimum cycle length.

    ``rule="certified"`` removes vertices closer than :func:`discard_radius`.
    ``rule="composite"`` is the composite-distance guard (fire when the least
    composite cycle is not minimal and its composite distance is below
    ``3 * gamma / 2``, then remove vertices no farther than that cycle). It
    is unsafe under truncated searches: an undetected cycle close to the root
    can have a smaller composite distance than every detected one. It is kept
    for comparison only.
    """
    delta = state.delta
    if rule == "certified":
        radius = discard_radius(state, gamma)
        if not radius > 0:
            return []

        def keep(z):
            return delta[z] >= radius

    elif rule == "composite":
        if not (state.d_plus_min < INF and state.ell_best > gamma and state.d_plus_min < 1.5 * gamma):
            return []
        limit = state.dist_to_cycle

        def keep(z):
            return delta[z] > limit

    else:
        raise ValueError(f"unknown discard rule {rule!r}")
    x = state.root
    removed = []
    for z in state.order:
        if z != x and not keep(z) and z in active.active and z not in active.processed:
            active.active.discard(z)
            removed.append(z)
    if observer is not None and removed:
        observer.on_discard(state, removed)
    return removed


def root_order(graph: WeightedGraph, order: str = "id") -> list:
    if order == "id":
        return list(range(graph.vertex_count))
    if order == "degree-desc":
        return sorted(range(graph.vertex_count), key=lambda v: (-graph.degree(v), v))
    raise ValueError(f"unknown root order {order!r}")


def find_mwc(
    graph: WeightedGraph,
    *,
    discarding: bool = True,
    discard_rule: str = "certified",
    discard_reach: float = 0.25,
    pruning: Optional[PruneConfig] = None,
    collect_witness: bool = True,
    order: str = "id",
    weights: Optional[Sequence[float]] = None,
    observer: Optional[SearchObserver] = None,
) -> MwcResult:
    """Length (and optionally a witness) of a minimum weight simple cycle.

    Returns ``gamma = inf`` and no witness for forests. The result does not
    depend on ``discarding`` or ``pruning``; they only change the work done.

    With pruning, searches may be confined to a hop ball around the last
    improving cycle. A confined search whose frontier never reached outside
    the ball is as good as a full one; otherwise its root is searched again
    later over the full active graph.

    With the certified rule each search may run past ``gamma / 2`` by up to
    ``discard_reach * gamma`` to widen the discard radius.
    """
    if discard_rule not in ("certified", "composite"):
        raise ValueError(f"unknown discard rule {discard_rule!r}")
    reach = discard_reach if discarding and discard_rule == "certified" else None
    stats = MwcStats()
    active = ActiveSet.full(graph.vertex_count)
    prune_cfg = pruning if pruning is not None and pruning.enabled else None
    pstate = PruneState()
    roots = root_order(graph, order)
    needs_full: set = set()
    discarded: set = set()
    gamma = INF
    witness: Optional[CycleRecord] = None
    trace: list = []
    collect = "best" if (collect_witness or prune_cfg is not None) else "none"
    i = 0

    while True:
        scope = None
        x = None
        if prune_cfg is not None:
            scope, pstate = step(pstate, prune_cfg)
            if scope is not None:
                for v in roots:
                    if v in scope and v in active.active and v not in active.processed and v not in needs_full:
                        x = v
                        break
                if x is None:
                    scope = None
                    pstate = PruneState(seed_vertices=pstate.seed_vertices)
        if x is None:
            while i < len(roots) and (roots[i] not in active.active or roots[i] in active.processed):
                i += 1
            if i == len(roots):
                break
            x = roots[i]

        if scope is None:
            g_out, state, found = inner_search(
                graph, x, gamma, active.active,
                weights=weights, collect=collect, observer=observer, stats=stats,
                discard_reach=reach,
            )
        else:
            stats.pruned_searches += 1
            view = scope & active.active
            g_out, state, found = inner_search(
                graph, x, gamma, view, weights=weights, collect=collect,
                outer=active.active, observer=observer, stats=stats,
                discard_reach=reach,
            )

        improved = g_out < gamma
        if improved:
            gamma = g_out
            trace.append(gamma)
            if found:
                witness = found[0]

        if scope is None or not state.boundary_hit:
            active.processed.add(x)
            needs_full.discard(x)
            if discarding:
                removed = apply_discarding(state, gamma, active, observer, discard_rule)
                discarded.update(removed)
                stats.vertices_discarded += len(removed)
        else:
            needs_full.add(x)
            stats.requeued_roots += 1

        if prune_cfg is not None:
            if scope is not None and state.d_plus_min == INF:
                pstate = expire(pstate, prune_cfg)
            elif scope is None and improved and witness is not None:
                pstate = install(pstate, graph, witness.vertices, prune_cfg)

    if not collect_witness:
        witness = None
    return MwcResult(gamma, witness, stats, frozenset(discarded), trace)
