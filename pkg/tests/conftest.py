from __future__ import annotations

import random

import networkx as nx
import pytest

from mwcycle.graph import WeightedGraph
from mwcycle.mwc import SearchObserver
from mwcycle.oracles import reference_dijkstra
from mwcycle.validation import check_graph


# one "PASS/FAIL criterion" line per acceptance check, echoed in the terminal summary
ACCEPTANCE_LINES: list = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)


def random_er(seed: int, n_range=(4, 12), probs=(0.3, 0.5), wmax_choices=(1, 3, 10, 100)) -> WeightedGraph:
    """Small seeded ER graph with integer weights (ties included on purpose)."""
    rng = random.Random(seed)
    n = rng.randint(*n_range)
    p = rng.choice(probs)
    g = nx.gnp_random_graph(n, p, seed=seed)
    wmax = rng.choice(wmax_choices)
    return WeightedGraph(n, [(u, v, float(rng.randint(1, wmax))) for u, v in sorted(g.edges())])


def unit(n: int, pairs) -> WeightedGraph:
    return WeightedGraph(n, [(u, v, 1.0) for u, v in pairs])


@pytest.fixture
def triangle() -> WeightedGraph:
    return unit(3, [(0, 1), (1, 2), (0, 2)])


@pytest.fixture
def k4() -> WeightedGraph:
    return unit(4, [(0, 1), (0, 2), (0, 3), (1, 2), (1, 3), (2, 3)])


@pytest.fixture
def c5_chord() -> WeightedGraph:
    return unit(5, [(0, 1), (1, 2), (2, 3), (3, 4), (0, 4), (0, 2)])


@pytest.fixture
def petersen() -> WeightedGraph:
    return check_graph(nx.petersen_graph())


@pytest.fixture
def path10() -> WeightedGraph:
    return unit(10, [(i, i + 1) for i in range(9)])


class InvariantChecker(SearchObserver):
    """Checks shortest-path and cycle-formula invariants on every event."""

    def __init__(self, graph: WeightedGraph):
        self.graph = graph
        self.violations: list = []
        self.gammas: list = []
        self.ref: dict = {}
        self.events = 0

    def _reference(self, state):
        key = (state.root, state.scope)
        if key not in self.ref:
            self.ref[key] = reference_dijkstra(self.graph, state.root, state.scope)
        return self.ref[key]

    def on_extract(self, state, y):
        ref = self._reference(state)
        delta = state.delta
        q = state.order
        if delta[y] != ref[y]:
            self.violations.append(("delta-eq", state.root, y))
        q_set = set(q)
        worst_q = max(delta[u] for u in q)
        for v in state.touched:
            if v in q_set:
                continue
            if delta[v] < worst_q:
                self.violations.append(("delta-less", state.root, v))
        for v in state.touched:
            p = state.pred[v]
            if p == -1:
                continue
            if not state.finalized[p] or delta[v] != delta[p] + self.graph.weight(p, v):
                self.violations.append(("delta-pred", state.root, v))
        self.gammas.append(state.gamma)
        self.events += 1

    def on_cycle(self, state, event):
        self.gammas.append(event.gamma)
        verts = event.vertices
        total = sum(self.graph.weight(verts[i], verts[(i + 1) % len(verts)]) for i in range(len(verts)))
        if total != event.length:
            self.violations.append(("cycle-length", state.root, verts))
        if event.composite != event.dist_to_cycle + event.length:
            self.violations.append(("composite", state.root, verts))

    def on_search_end(self, state):
        ref = self._reference(state)
        done = state.finalized
        for v, d in ref.items():
            if not done[v] and not d >= state.gamma / 2:
                self.violations.append(("early-stop", state.root, v))
