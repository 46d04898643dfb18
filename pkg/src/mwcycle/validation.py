"""Input coercion for the estimator front end."""

from __future__ import annotations

import numpy as np

from .graph import GraphValidationError, WeightedGraph


def check_graph(X) -> WeightedGraph:
    """Accept a :class:`WeightedGraph`, a networkx graph or an ``(m, 3)`` edge array.

    Networkx graphs read the ``weight`` edge attribute (default 1) and keep
    their node labels. Edge arrays hold ``u, v, w`` rows with integer vertex
    ids; the vertex count is one more than the largest id.
    """
    if isinstance(X, WeightedGraph):
        return X
    if hasattr(X, "nodes") and hasattr(X, "edges"):
        if X.is_directed() or X.is_multigraph():
            raise GraphValidationError("expected a simple undirected graph")
        nodes = list(X.nodes())
        index = {v: i for i, v in enumerate(nodes)}
        edges = [(index[u], index[v], float(d.get("weight", 1.0))) for u, v, d in X.edges(data=True)]
        return WeightedGraph(len(nodes), edges, labels=[str(v) for v in nodes])
    arr = np.asarray(X, dtype=float)
    if arr.size == 0:
        raise GraphValidationError("empty edge array; pass a WeightedGraph for edgeless graphs")
    if arr.ndim != 2 or arr.shape[1] != 3:
        raise GraphValidationError(f"edge array must have shape (m, 3), got {arr.shape}")
    ends = arr[:, :2]
    if not np.all(np.isfinite(ends)) or np.any(ends != np.round(ends)) or np.any(ends < 0):
        raise GraphValidationError("edge endpoints must be nonnegative integers")
    ends = ends.astype(int)
    n = int(ends.max()) + 1
    return WeightedGraph(n, [(int(u), int(v), float(w)) for (u, v), w in zip(ends, arr[:, 2])])
