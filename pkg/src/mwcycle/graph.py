"""Undirected positively-weighted graphs, cycle records and graph IO."""

from __future__ import annotations

import io
import json
import math
from dataclasses import dataclass, field
from typing import IO, Iterable, Optional, Sequence


class GraphError(ValueError):
    """Base class for graph construction and parsing failures."""


class GraphValidationError(GraphError):
    """The edges do not describe a simple graph with positive weights."""


class GraphFormatError(GraphError):
    """A graph file could not be parsed."""


class WeightedGraph:
    """Immutable undirected simple graph with positive edge weights.

    Vertices are ``0..n-1``; ``labels[i]`` keeps the external name of vertex
    ``i`` (always a string). Edges are stored as ``(u, v, w)`` with ``u < v``
    in insertion order, and the position of an edge in ``edges`` is its
    edge id.
    """

    __slots__ = ("vertex_count", "edges", "adjacency", "labels", "_index", "_weights")

    def __init__(
        self,
        vertex_count: int,
        edges: Iterable[tuple[int, int, float]],
        labels: Optional[Sequence[str]] = None,
    ):
        if vertex_count < 0:
            raise GraphValidationError("vertex_count must be >= 0")
        norm: list[tuple[int, int, float]] = []
        index: dict[tuple[int, int], int] = {}
        for k, (u, v, w) in enumerate(edges):
            u, v, w = int(u), int(v), float(w)
            if not (0 <= u < vertex_count and 0 <= v < vertex_count):
                raise GraphValidationError(f"edge {k} ({u}, {v}): vertex out of range")
            if u == v:
                raise GraphValidationError(f"edge {k} ({u}, {v}): self-loop")
            if not (w > 0) or math.isinf(w):
                raise GraphValidationError(f"edge {k} ({u}, {v}): weight {w!r} is not positive and finite")
            if u > v:
                u, v = v, u
            if (u, v) in index:
                raise GraphValidationError(f"edge {k} ({u}, {v}): duplicate of edge {index[(u, v)]}")
            index[(u, v)] = len(norm)
            norm.append((u, v, w))

        adjacency: list[list[tuple[int, int, float]]] = [[] for _ in range(vertex_count)]
        for eid, (u, v, w) in enumerate(norm):
            adjacency[u].append((v, eid, w))
            adjacency[v].append((u, eid, w))

        if labels is None:
            labels = [str(i) for i in range(vertex_count)]
        labels = tuple(str(lab) for lab in labels)
        if len(labels) != vertex_count:
            raise GraphValidationError("labels must have one entry per vertex")
        if len(set(labels)) != vertex_count:
            raise GraphValidationError("labels must be unique")

        self.vertex_count = vertex_count
        self.edges = tuple(norm)
        self.adjacency = tuple(tuple(a) for a in adjacency)
        self.labels = labels
        self._index = index
        self._weights = tuple(w for _, _, w in norm)

    @property
    def edge_count(self) -> int:
        return len(self.edges)

    @property
    def weights(self) -> tuple[float, ...]:
        return self._weights

    def edge_id(self, u: int, v: int) -> Optional[int]:
        if u > v:
            u, v = v, u
        return self._index.get((u, v))

    def has_edge(self, u: int, v: int) -> bool:
        return self.edge_id(u, v) is not None

    def weight(self, u: int, v: int) -> float:
        eid = self.edge_id(u, v)
        if eid is None:
            raise KeyError((u, v))
        return self.edges[eid][2]

    def degree(self, v: int) -> int:
        return len(self.adjacency[v])

    def neighbors(self, v: int) -> list[int]:
        return [z for z, _, _ in self.adjacency[v]]

    def with_weights(self, weights: Sequence[float]) -> "WeightedGraph":
        """Same topology and labels, new positive weights (one per edge id)."""
        if len(weights) != self.edge_count:
            raise GraphValidationError("need one weight per edge")
        return WeightedGraph(
            self.vertex_count,
            [(u, v, w) for (u, v, _), w in zip(self.edges, weights)],
            self.labels,
        )

    def is_forest(self) -> bool:
        parent = list(range(self.vertex_count))

        def find(a: int) -> int:
            while parent[a] != a:
                parent[a] = parent[parent[a]]
                a = parent[a]
            return a

        for u, v, _ in self.edges:
            ru, rv = find(u), find(v)
            if ru == rv:
                return False
            parent[ru] = rv
        return True

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        return (
            self.vertex_count == other.vertex_count
            and self.edges == other.edges
            and self.labels == other.labels
        )

    def __hash__(self) -> int:
        return hash((self.vertex_count, self.edges, self.labels))

    def __repr__(self) -> str:
        return f"WeightedGraph(n={self.vertex_count}, m={self.edge_count})"


@dataclass(frozen=True)
class CycleRecord:
    """A simple cycle in canonical vertex order.

    Two records compare equal iff they describe the same cycle; the length and
    the provenance fields (root, distance to the cycle, composite distance) do
    not take part in comparisons.
    """

    vertices: tuple[int, ...]
    length: float = field(compare=False)
    edge_ids: tuple[int, ...] = field(default=(), compare=False, repr=False)
    root: Optional[int] = field(default=None, compare=False)
    dist_to_cycle: Optional[float] = field(default=None, compare=False)
    composite: Optional[float] = field(default=None, compare=False)

    @property
    def key(self) -> tuple[int, ...]:
        return self.vertices

    def __len__(self) -> int:
        return len(self.vertices)


def canonical_order(vertices: Sequence[int]) -> tuple[int, ...]:
    """Rotate so the smallest id leads, then orient towards the smaller neighbor."""
    n = len(vertices)
    i = min(range(n), key=vertices.__getitem__)
    rotated = tuple(vertices[i:]) + tuple(vertices[:i])
    if n > 2 and rotated[-1] < rotated[1]:
        rotated = (rotated[0],) + tuple(reversed(rotated[1:]))
    return rotated


def cycle_edge_ids(graph: WeightedGraph, vertices: Sequence[int]) -> list[int]:
    """Edge ids along a closed vertex sequence, in traversal order."""
    out = []
    n = len(vertices)
    for i in range(n):
        a, b = vertices[i], vertices[(i + 1) % n]
        eid = graph.edge_id(a, b)
        if eid is None:
            raise GraphValidationError(f"cycle step {a}-{b} is not an edge")
        out.append(eid)
    return out


def canonicalize_cycle(
    vertices: Sequence[int],
    graph: WeightedGraph,
    weights: Optional[Sequence[float]] = None,
    *,
    root: Optional[int] = None,
    dist_to_cycle: Optional[float] = None,
) -> CycleRecord:
    """Build the canonical :class:`CycleRecord` of a simple cycle.

    ``weights`` overrides the graph weights (indexed by edge id) when the
    length should be measured under another edge function, e.g. a density.
    The length is summed along the canonical sequence, so equal cycles get
    bit-identical lengths.
    """
    if len(vertices) < 3:
        raise GraphValidationError("a simple cycle needs at least 3 vertices")
    if len(set(vertices)) != len(vertices):
        raise GraphValidationError(f"cycle {tuple(vertices)} repeats a vertex")
    canon = canonical_order(vertices)
    eids = cycle_edge_ids(graph, canon)
    w = graph.weights if weights is None else weights
    length = 0.0
    for e in eids:
        length += w[e]
    composite = None if dist_to_cycle is None else dist_to_cycle + length
    return CycleRecord(canon, length, tuple(sorted(eids)), root, dist_to_cycle, composite)


# --------------------------------------------------------------------- IO


def _open_text(source) -> IO[str]:
    if isinstance(source, (bytes, bytearray)):
        return io.StringIO(bytes(source).decode("utf-8"))
    if isinstance(source, str):
        return io.StringIO(source)
    if hasattr(source, "read"):
        data = source.read()
        if isinstance(data, bytes):
            data = data.decode("utf-8")
        return io.StringIO(data)
    raise TypeError(f"cannot read graph from {type(source).__name__}")


def _from_labelled(vertex_labels: list[str], labelled_edges) -> WeightedGraph:
    ids = {lab: i for i, lab in enumerate(vertex_labels)}
    edges = []
    seen: dict[tuple[int, int], object] = {}
    for ctx, a, b, w in labelled_edges:
        u, v = ids[a], ids[b]
        if u == v:
            raise GraphValidationError(f"{ctx}: self-loop on {a!r}")
        if not (w > 0) or math.isinf(w):
            raise GraphValidationError(f"{ctx}: weight {w!r} must be positive and finite")
        pair = (min(u, v), max(u, v))
        if pair in seen:
            raise GraphValidationError(f"{ctx}: duplicate edge {a!r}-{b!r} (first at {seen[pair]})")
        seen[pair] = ctx
        edges.append((u, v, w))
    return WeightedGraph(len(vertex_labels), edges, vertex_labels)


def _parse_edge_list(text: IO[str]) -> WeightedGraph:
    labels: list[str] = []
    known: set[str] = set()
    raw = []

    def see(lab: str) -> None:
        if lab not in known:
            known.add(lab)
            labels.append(lab)

    for lineno, line in enumerate(text, start=1):
        line = line.split("#", 1)[0].strip()
        if not line:
            continue
        parts = line.split()
        if len(parts) == 1:
            see(parts[0])
            continue
        if len(parts) not in (2, 3):
            raise GraphFormatError(f"line {lineno}: expected 'u v w', got {line!r}")
        if len(parts) == 2:
            w = 1.0
        else:
            try:
                w = float(parts[2])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad weight {parts[2]!r}") from None
        see(parts[0])
        see(parts[1])
        raw.append((f"line {lineno}", parts[0], parts[1], w))
    return _from_labelled(labels, raw)


def _parse_json(text: IO[str]) -> WeightedGraph:
    try:
        doc = json.load(text)
    except json.JSONDecodeError as exc:
        raise GraphFormatError(f"invalid JSON: {exc}") from None
    if not isinstance(doc, dict) or "edges" not in doc:
        raise GraphFormatError("JSON graph must be an object with an 'edges' list")
    labels: list[str] = []
    known: set[str] = set()
    for node in doc.get("nodes", []):
        lab = str(node)
        if lab in known:
            raise GraphValidationError(f"duplicate node {lab!r}")
        known.add(lab)
        labels.append(lab)
    raw = []
    for k, edge in enumerate(doc["edges"]):
        if not isinstance(edge, (list, tuple)) or len(edge) not in (2, 3):
            raise GraphFormatError(f"edge {k}: expected [u, v, w], got {edge!r}")
        a, b = str(edge[0]), str(edge[1])
        try:
            w = float(edge[2]) if len(edge) == 3 else 1.0
        except (TypeError, ValueError):
            raise GraphFormatError(f"edge {k}: bad weight {edge[2]!r}") from None
        for lab in (a, b):
            if lab not in known:
                known.add(lab)
                labels.append(lab)
        raw.append((f"edge {k}", a, b, w))
    return _from_labelled(labels, raw)


def load_graph(source, format: str = "edge-list") -> WeightedGraph:
    """Parse a graph from text, bytes or a file object.

    ``format`` is ``"edge-list"`` (whitespace separated ``u v w`` lines, ``#``
    comments, a single token declares a vertex) or ``"json"``
    (``{"nodes": [...], "edges": [[u, v, w], ...]}``). Labels are renumbered
    ``0..n-1`` in order of first appearance.
    """
    text = _open_text(source)
    if format in ("edge-list", "edgelist", "txt"):
        return _parse_edge_list(text)
    if format == "json":
        return _parse_json(text)
    raise ValueError(f"unknown graph format {format!r}")


def read_graph(path, format: Optional[str] = None) -> WeightedGraph:
    path = str(path)
    if format is None:
        format = "json" if path.endswith(".json") else "edge-list"
    with open(path, "rb") as fh:
        return load_graph(fh, format)


def _first_appearance_is_identity(graph: WeightedGraph) -> bool:
    nxt = 0
    seen = [False] * graph.vertex_count
    for u, v, _ in graph.edges:
        for a in (u, v):
            if not seen[a]:
                if a != nxt:
                    return False
                seen[a] = True
                nxt += 1
    return nxt == graph.vertex_count


def dumps_graph(graph: WeightedGraph, format: str = "edge-list") -> str:
    """Serialize so that ``load_graph(dumps_graph(g)) == g``."""
    labels = graph.labels
    if format == "json":
        doc = {
            "nodes": list(labels),
            "edges": [[labels[u], labels[v], w] for u, v, w in graph.edges],
        }
        return json.dumps(doc, indent=None) + "\n"
    if format not in ("edge-list", "edgelist", "txt"):
        raise ValueError(f"unknown graph format {format!r}")
    for lab in labels:
        if not lab or any(c.isspace() for c in lab) or "#" in lab:
            raise GraphFormatError(f"label {lab!r} cannot be written as an edge list")
    out = []
    if not _first_appearance_is_identity(graph):
        out.extend(labels)
    out.extend(f"{labels[u]} {labels[v]} {w!r}" for u, v, w in graph.edges)
    return "\n".join(out) + "\n"


def save_graph(graph: WeightedGraph, path, format: Optional[str] = None) -> None:
    path = str(path)
    if format is None:
        format = "json" if path.endswith(".json") else "edge-list"
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(dumps_graph(graph, format))
