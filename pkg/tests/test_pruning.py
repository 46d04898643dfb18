from __future__ import annotations

from collections import deque

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from conftest import unit
from mwcycle.generators import grid_graph
from mwcycle.mwc import find_mwc
from mwcycle.pruning import PruneConfig, PruneState, build_view, expire, hop_ball, install, step


def _bfs_ball(graph, seeds, radius):
    dist = {}
    for s in seeds:
        queue = deque([(s, 0)])
        seen = {s}
        while queue:
            a, d = queue.popleft()
            dist[a] = min(dist.get(a, d), d)
            if d == radius:
                continue
            for b in graph.neighbors(a):
                if b not in seen:
                    seen.add(b)
                    queue.append((b, d + 1))
    return set(dist)


def test_config_validation():
    with pytest.raises(ValueError):
        PruneConfig(True, 0)
    with pytest.raises(ValueError):
        PruneConfig(True, 3, -1)
    with pytest.raises(ValueError):
        PruneConfig(True, 3, 1, 0.0)


def test_all_seeds_give_whole_graph(k4):
    assert build_view(k4, range(4), PruneConfig(True, 3, 0)) == frozenset(range(4))


def test_threshold_boundary_is_kept(path10):
    cfg = PruneConfig(True, 3, 2, 0.3)
    assert build_view(path10, {0}, cfg) == frozenset({0, 1, 2})
    assert build_view(path10, {0}, PruneConfig(True, 3, 1, 0.3)) is None


def test_empty_seeds_raise(path10):
    with pytest.raises(ValueError):
        build_view(path10, [], PruneConfig(True))


def test_grid_ball_matches_reference_bfs():
    g = grid_graph(10)
    square = find_mwc(g).witness.vertices
    assert hop_ball(g, square, 3) == _bfs_ball(g, square, 3)


@given(st.integers(0, 4), st.sets(st.integers(0, 24), min_size=1, max_size=4))
@settings(max_examples=50)
def test_hop_ball_property(radius, seeds):
    g = grid_graph(5)
    assert hop_ball(g, seeds, radius) == _bfs_ball(g, seeds, radius)


def _scopes(state, cfg, steps):
    out = []
    for _ in range(steps):
        scope, state = step(state, cfg)
        out.append("full" if scope is None else "view")
    return out, state


def test_counter_gives_a_full_step_every_interval(path10):
    cfg = PruneConfig(True, 3, 9, 0.1)
    state = install(PruneState(), path10, {0}, cfg)
    scopes, _ = _scopes(state, cfg, 6)
    # install leaves the counter at 1, so interval 3 allows two view steps
    assert scopes == ["view", "view", "full", "full", "full", "full"]


@given(st.integers(1, 6), st.lists(st.booleans(), min_size=1, max_size=40))
def test_full_scope_at_least_once_per_interval(interval, installs):
    g = unit(10, [(i, i + 1) for i in range(9)])
    cfg = PruneConfig(True, interval, 9, 0.1)
    state = PruneState()
    run = 0
    for want_install in installs:
        scope, state = step(state, cfg)
        run = 0 if scope is None else run + 1
        assert run < interval
        if want_install:
            state = install(state, g, {0}, cfg)


def test_disabled_is_always_full(path10):
    cfg = PruneConfig(False)
    state = install(PruneState(), path10, {0}, cfg)
    assert _scopes(state, cfg, 3)[0] == ["full"] * 3


def test_aggressive_prune_means_full_until_next_install(path10):
    cfg = PruneConfig(True, 4, 0, 0.5)
    state = install(PruneState(), path10, {0}, cfg)
    assert state.view is None
    assert _scopes(state, cfg, 3)[0] == ["full"] * 3


def test_install_only_after_full_step(path10):
    cfg = PruneConfig(True, 5, 9, 0.1)
    state = install(PruneState(), path10, {0}, cfg)
    _, state = step(state, cfg)
    assert not state.last_full
    assert install(state, path10, {5}, cfg) is state


def test_expire_forces_full(path10):
    cfg = PruneConfig(True, 5, 9, 0.1)
    state = expire(install(PruneState(), path10, {0}, cfg), cfg)
    assert step(state, cfg)[0] is None
