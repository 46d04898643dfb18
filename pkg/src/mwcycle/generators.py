"""Seeded benchmark graph generators.

Every generator is a pure function of its :class:`GraphSpec`; randomized kinds
draw all randomness from the spec's seed, so the same spec always serializes
to the same bytes.
"""

from __future__ import annotations

import random
from collections import deque
from dataclasses import dataclass, field
from typing import Any, Optional

import networkx as nx
import numpy as np

from .graph import WeightedGraph

RANDOM_KINDS = {"er", "ba", "ws", "light-tree", "proximity"}

# positional parameter names per kind
_POSITIONAL = {
    "grid": ("d",),
    "light-tree": ("n",),
    "er": ("n", "p"),
    "ba": ("n", "m"),
    "ws": ("n", "k", "p"),
    "cycle": ("n",),
    "complete": ("n",),
    "proximity": ("n",),
}
_ALIASES = {
    "single-cycle": "cycle",
    "erdos-renyi": "er",
    "barabasi-albert": "ba",
    "watts-strogatz": "ws",
    "lighttree": "light-tree",
    "delaunay": "proximity",
}
_INT_PARAMS = {"d", "n", "m", "k", "wmin", "wmax", "seed"}


class GraphSpecError(ValueError):
    pass


@dataclass(frozen=True)
class GraphSpec:
    """Generator kind, size parameters, weight parameters and seed."""

    kind: str
    params: dict = field(default_factory=dict)
    seed: Optional[int] = None

    def __post_init__(self):
        kind = _ALIASES.get(self.kind, self.kind)
        if kind not in _POSITIONAL:
            raise GraphSpecError(f"unknown generator kind {self.kind!r}")
        object.__setattr__(self, "kind", kind)

    @property
    def is_random(self) -> bool:
        return self.kind in RANDOM_KINDS

    def __str__(self) -> str:
        names = _POSITIONAL[self.kind]
        parts = [self.kind] + [_fmt(self.params[k]) for k in names if k in self.params]
        parts += [f"{k}={_fmt(v)}" for k, v in sorted(self.params.items()) if k not in names]
        if self.seed is not None:
            parts.append(f"seed={self.seed}")
        return ":".join(parts)


def _fmt(v: Any) -> str:
    return repr(v) if isinstance(v, float) else str(v)


def parse_graph_spec(text: str) -> GraphSpec:
    """Parse inline specs such as ``grid:5`` or ``er:100:0.05:seed=3``."""
    tokens = [t for t in text.strip().split(":") if t != ""]
    if not tokens:
        raise GraphSpecError("empty generator spec")
    kind = _ALIASES.get(tokens[0].lower(), tokens[0].lower())
    if kind not in _POSITIONAL:
        raise GraphSpecError(f"unknown generator kind {tokens[0]!r}")
    names = _POSITIONAL[kind]
    params: dict[str, Any] = {}
    seed = None
    pos = 0
    for tok in tokens[1:]:
        if "=" in tok:
            key, val = tok.split("=", 1)
        else:
            if pos >= len(names):
                raise GraphSpecError(f"too many positional parameters for {kind!r}")
            key, val = names[pos], tok
            pos += 1
        try:
            value: Any = int(val) if key in _INT_PARAMS else float(val)
        except ValueError:
            raise GraphSpecError(f"bad value {val!r} for {key!r}") from None
        if key == "seed":
            seed = value
        else:
            params[key] = value
    missing = [k for k in names if k not in params]
    if missing:
        raise GraphSpecError(f"{kind!r} needs parameter(s) {', '.join(missing)}")
    return GraphSpec(kind, params, seed)


# ----------------------------------------------------------------- kinds


def grid_graph(d: int) -> WeightedGraph:
    """d x d grid whose edge weights double with hop distance from the far corner.

    Vertices are labelled in BFS order from the corner (0, 0), so the corner
    (d-1, d-1) gets the largest id. An edge weighs ``2**h`` where ``h`` is the
    hop distance to that corner of its closer endpoint.
    """
    if d < 2:
        raise GraphSpecError("grid needs d >= 2")
    ids: dict[tuple[int, int], int] = {(0, 0): 0}
    queue = deque([(0, 0)])
    while queue:
        r, c = queue.popleft()
        for nr, nc in ((r, c + 1), (r + 1, c), (r, c - 1), (r - 1, c)):
            if 0 <= nr < d and 0 <= nc < d and (nr, nc) not in ids:
                ids[(nr, nc)] = len(ids)
                queue.append((nr, nc))

    def hops(cell):
        return (d - 1 - cell[0]) + (d - 1 - cell[1])

    edges = []
    for (r, c), u in ids.items():
        for cell in ((r, c + 1), (r + 1, c)):
            if cell in ids:
                h = min(hops((r, c)), hops(cell))
                edges.append((min(u, ids[cell]), max(u, ids[cell]), float(2**h)))
    edges.sort()
    return WeightedGraph(d * d, edges)


def cycle_graph(n: int, rng: Optional[random.Random] = None, wmin: int = 1, wmax: int = 1) -> WeightedGraph:
    if n < 3:
        raise GraphSpecError("cycle needs n >= 3")
    pairs = [(i, (i + 1) % n) for i in range(n)]
    return WeightedGraph(n, _weighted(pairs, rng, wmin, wmax))


def complete_graph(n: int, rng: Optional[random.Random] = None, wmin: int = 1, wmax: int = 1) -> WeightedGraph:
    if n < 1:
        raise GraphSpecError("complete needs n >= 1")
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    return WeightedGraph(n, _weighted(pairs, rng, wmin, wmax))


def _weighted(pairs, rng, wmin, wmax):
    if wmin < 1 or wmax < wmin:
        raise GraphSpecError("integer weight range needs 1 <= wmin <= wmax")
    if rng is None or wmin == wmax:
        return [(u, v, float(wmin)) for u, v in pairs]
    return [(u, v, float(rng.randint(wmin, wmax))) for u, v in pairs]


def _from_nx(g: nx.Graph, n: int, rng: random.Random, wmin: int, wmax: int) -> WeightedGraph:
    pairs = sorted((min(u, v), max(u, v)) for u, v in g.edges())
    return WeightedGraph(n, _weighted(pairs, rng, wmin, wmax))


def proximity_pairs(n: int, seed: int) -> list[tuple[int, int]]:
    """Edges of the Delaunay triangulation of ``n`` uniform random points."""
    from scipy.spatial import Delaunay

    if n < 3:
        raise GraphSpecError("proximity needs n >= 3")
    pts = np.random.default_rng(seed).random((n, 2))
    tri = Delaunay(pts)
    pairs = set()
    for simplex in tri.simplices:
        a, b, c = (int(x) for x in simplex)
        for u, v in ((a, b), (b, c), (a, c)):
            pairs.add((min(u, v), max(u, v)))
    return sorted(pairs)


def uniform_spanning_tree(adjacency: list[list[int]], rng: random.Random) -> list[tuple[int, int]]:
    """Wilson's loop-erased random walk; the graph must be connected."""
    n = len(adjacency)
    in_tree = [False] * n
    nxt = [-1] * n
    in_tree[rng.randrange(n)] = True
    for start in range(n):
        u = start
        while not in_tree[u]:
            nxt[u] = rng.choice(adjacency[u])
            u = nxt[u]
        u = start
        while not in_tree[u]:
            in_tree[u] = True
            u = nxt[u]
    return sorted((min(u, nxt[u]), max(u, nxt[u])) for u in range(n) if nxt[u] >= 0)


def light_tree_graph(n: int, seed: int) -> tuple[WeightedGraph, dict]:
    """Unit-weight random spanning tree plus one unit non-tree edge.

    The base graph is a random proximity (Delaunay) graph. All other non-tree
    edges get weight ``n + 1``, longer than any tree path, so the unique
    minimum cycle is the chosen edge closed by its tree path.
    """
    if n < 4:
        raise GraphSpecError("light-tree needs n >= 4")
    rng = random.Random(seed)
    pairs = proximity_pairs(n, seed)
    adjacency: list[list[int]] = [[] for _ in range(n)]
    for u, v in pairs:
        adjacency[u].append(v)
        adjacency[v].append(u)
    tree = uniform_spanning_tree(adjacency, rng)
    tree_set = set(tree)
    non_tree = [p for p in pairs if p not in tree_set]
    if not non_tree:
        raise GraphSpecError("base graph is a tree; cannot place the light edge")
    e_nt = non_tree[rng.randrange(len(non_tree))]
    w_big = float(n + 1)
    edges = [(u, v, 1.0 if (u, v) in tree_set or (u, v) == e_nt else w_big) for u, v in pairs]

    # tree path between the endpoints of the light edge
    tadj: dict[int, list[int]] = {i: [] for i in range(n)}
    for u, v in tree:
        tadj[u].append(v)
        tadj[v].append(u)
    parent = {e_nt[0]: None}
    queue = deque([e_nt[0]])
    while queue:
        a = queue.popleft()
        for b in tadj[a]:
            if b not in parent:
                parent[b] = a
                queue.append(b)
    path = [e_nt[1]]
    while path[-1] != e_nt[0]:
        path.append(parent[path[-1]])
    meta = {
        "kind": "light-tree",
        "n": n,
        "seed": seed,
        "tree_edges": [list(p) for p in tree],
        "e_nt": list(e_nt),
        "w_big": w_big,
        "tree_path": path[::-1],
        # tree path edges plus the light edge itself
        "expected_gamma": float(len(path)),
    }
    return WeightedGraph(n, edges), meta


def generate_with_meta(spec: GraphSpec) -> tuple[WeightedGraph, dict]:
    """Build the graph described by ``spec`` and return generator metadata."""
    p = spec.params
    seed = 0 if spec.seed is None else spec.seed
    rng = random.Random(seed)
    meta: dict = {"spec": str(spec)}
    kind = spec.kind
    if kind == "grid":
        g = grid_graph(p["d"])
        meta["v_last"] = g.vertex_count - 1
        return g, meta
    if kind == "cycle":
        return cycle_graph(p["n"], rng, p.get("wmin", 1), p.get("wmax", 1)), meta
    if kind == "complete":
        return complete_graph(p["n"], rng, p.get("wmin", 1), p.get("wmax", 1)), meta
    if kind == "light-tree":
        g, extra = light_tree_graph(p["n"], seed)
        meta.update(extra)
        return g, meta
    if kind == "proximity":
        pairs = proximity_pairs(p["n"], seed)
        return WeightedGraph(p["n"], _weighted(pairs, rng, p.get("wmin", 1), p.get("wmax", 1))), meta

    wmin, wmax = p.get("wmin", 1), p.get("wmax", 100)
    n = p["n"]
    if kind == "er":
        if not 0 <= p["p"] <= 1:
            raise GraphSpecError("er needs 0 <= p <= 1")
        g = nx.gnp_random_graph(n, p["p"], seed=seed)
    elif kind == "ba":
        if not 1 <= p["m"] < n:
            raise GraphSpecError("ba needs 1 <= m < n")
        g = nx.barabasi_albert_graph(n, p["m"], seed=seed)
    elif kind == "ws":
        if not (0 <= p["p"] <= 1 and 2 <= p["k"] < n):
            raise GraphSpecError("ws needs 2 <= k < n and 0 <= p <= 1")
        g = nx.watts_strogatz_graph(n, p["k"], p["p"], seed=seed)
    else:  # pragma: no cover - guarded by GraphSpec
        raise GraphSpecError(kind)
    return _from_nx(g, n, rng, wmin, wmax), meta


def generate(spec: GraphSpec | str) -> WeightedGraph:
    if isinstance(spec, str):
        spec = parse_graph_spec(spec)
    return generate_with_meta(spec)[0]
