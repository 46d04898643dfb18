"""Hop-limited search views around recently found cycles.

The view is a heuristic: searches restricted to it are cheap but may miss
cycles, so the owner must fall back to the full graph at least once every
``reset_interval`` steps.
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field, replace
from typing import Iterable, Optional

from .graph import WeightedGraph


@dataclass(frozen=True)
class PruneConfig:
    enabled: bool = False
    reset_interval: int = 5
    distance_threshold: int = 3
    min_fraction: float = 0.3

    def __post_init__(self):
        if self.reset_interval < 1:
            raise ValueError("reset_interval must be >= 1")
        if self.distance_threshold < 0:
            raise ValueError("distance_threshold must be >= 0")
        if not 0 < self.min_fraction <= 1:
            raise ValueError("min_fraction must be in (0, 1]")


@dataclass
class PruneState:
    view: Optional[frozenset] = None
    steps_in_view: int = 0
    seed_vertices: frozenset = field(default_factory=frozenset)
    last_full: bool = True


def hop_ball(graph: WeightedGraph, seeds: Iterable[int], radius: int) -> set[int]:
    """Vertices within ``radius`` hops of any seed (multi-source BFS)."""
    dist = {s: 0 for s in seeds}
    queue = deque(dist)
    while queue:
        a = queue.popleft()
        da = dist[a]
        if da == radius:
            continue
        for b, _, _ in graph.adjacency[a]:
            if b not in dist:
                dist[b] = da + 1
                queue.append(b)
    return set(dist)


def build_view(graph: WeightedGraph, seeds: Iterable[int], config: PruneConfig) -> Optional[frozenset]:
    """BFS ball around ``seeds``, or None when it is smaller than the minimum fraction."""
    seeds = list(seeds)
    if not seeds:
        raise ValueError("build_view needs at least one seed vertex")
    keep = hop_ball(graph, seeds, config.distance_threshold)
    if len(keep) < config.min_fraction * graph.vertex_count:
        return None
    return frozenset(keep)


def step(state: PruneState, config: PruneConfig) -> tuple[Optional[frozenset], PruneState]:
    """Pick the scope of the next search: the active view, or None for the full graph."""
    if config.enabled and state.view is not None and state.steps_in_view < config.reset_interval:
        return state.view, replace(state, steps_in_view=state.steps_in_view + 1, last_full=False)
    return None, replace(state, view=None, steps_in_view=0, last_full=True)


def install(
    state: PruneState, graph: WeightedGraph, seeds: Iterable[int], config: PruneConfig
) -> PruneState:
    """Center a new view on ``seeds`` after a full-graph step.

    Views are only (re)installed right after a full-scope step. A ball below
    the minimum fraction leaves no view, so the next step is full again.
    """
    seeds = frozenset(seeds)
    if not (config.enabled and state.last_full and seeds):
        return state
    view = build_view(graph, seeds, config)
    if view is None:
        return replace(state, view=None, steps_in_view=config.reset_interval, seed_vertices=seeds)
    return replace(state, view=view, steps_in_view=1, seed_vertices=seeds)


def expire(state: PruneState, config: PruneConfig) -> PruneState:
    """Force the next step to use the full graph."""
    return replace(state, steps_in_view=config.reset_interval)
