"""Restricted p=2 modulus quadratic program.

Minimize ``sum(rho**2)`` subject to ``N @ rho >= 1`` where each row of the
binary matrix ``N`` marks the edges of one cycle. The solver is Hildreth's
dual coordinate ascent: the dual has only sign constraints, each coordinate
step is an exact 1-D maximization, and warm starts are free. The primal is
recovered as ``rho = N.T @ lam / 2``, so ``rho >= 0`` holds by construction.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import Iterable, Optional, Sequence

import numpy as np

from .graph import CycleRecord, WeightedGraph

logger = logging.getLogger(__name__)

try:  # the pass kernel is a tight scalar loop; compile it when we can
    from numba import njit
except ImportError:  # pragma: no cover - numba is a declared dependency
    def njit(*args, **kwargs):
        if args and callable(args[0]):
            return args[0]
        return lambda f: f


@njit(cache=True)
def _hildreth_pass(indptr, indices, lam, rho):
    """One cyclic sweep over all rows; returns the largest change in lambda."""
    biggest = 0.0
    for r in range(len(indptr) - 1):
        lo = indptr[r]
        hi = indptr[r + 1]
        length = 0.0
        for j in range(lo, hi):
            length += rho[indices[j]]
        new = lam[r] + 2.0 * (1.0 - length) / (hi - lo)
        if new < 0.0:
            new = 0.0
        step = new - lam[r]
        if step != 0.0:
            half = 0.5 * step
            for j in range(lo, hi):
                rho[indices[j]] += half
            lam[r] = new
            if abs(step) > biggest:
                biggest = abs(step)
    return biggest


class ConstraintMatrix:
    """Rows of edge ids, one per cycle; stored in CSR form.

    Rows are deduplicated as edge sets and must have at least three edges.
    """

    def __init__(self, rows: Iterable[Iterable[int]], edge_count: int):
        self.edge_count = int(edge_count)
        keys: list = []
        seen = set()
        for row in rows:
            key = tuple(sorted(set(int(e) for e in row)))
            if len(key) < 3:
                raise ValueError(f"constraint row {key} has fewer than 3 edges")
            if key[0] < 0 or key[-1] >= self.edge_count:
                raise ValueError(f"constraint row {key} has an edge id outside [0, {self.edge_count})")
            if key in seen:
                continue
            seen.add(key)
            keys.append(key)
        self.keys = keys
        self._index = {k: i for i, k in enumerate(keys)}
        sizes = np.fromiter((len(k) for k in keys), dtype=np.int64, count=len(keys))
        self.indptr = np.zeros(len(keys) + 1, dtype=np.int64)
        np.cumsum(sizes, out=self.indptr[1:])
        self.indices = np.fromiter(
            (e for k in keys for e in k), dtype=np.int64, count=int(self.indptr[-1])
        )

    def __len__(self) -> int:
        return len(self.keys)

    def __contains__(self, row) -> bool:
        return tuple(sorted(row)) in self._index

    def row_index(self, key: Sequence[int]) -> Optional[int]:
        return self._index.get(tuple(key))

    @property
    def row_sizes(self) -> np.ndarray:
        return np.diff(self.indptr)

    def toarray(self) -> np.ndarray:
        dense = np.zeros((len(self.keys), self.edge_count))
        for r, key in enumerate(self.keys):
            dense[r, list(key)] = 1.0
        return dense

    def lengths(self, rho: np.ndarray) -> np.ndarray:
        """Per-row sums of ``rho``."""
        if not self.keys:
            return np.zeros(0)
        return np.add.reduceat(rho[self.indices], self.indptr[:-1])

    def transpose_dot(self, lam: np.ndarray) -> np.ndarray:
        """``N.T @ lam``."""
        per_entry = np.repeat(lam, self.row_sizes)
        return np.bincount(self.indices, weights=per_entry, minlength=self.edge_count)

    def extended(self, rows: Iterable[Iterable[int]]) -> "ConstraintMatrix":
        return ConstraintMatrix(list(self.keys) + [tuple(r) for r in rows], self.edge_count)


def build_constraint_matrix(cycles: Iterable[CycleRecord], graph: WeightedGraph) -> ConstraintMatrix:
    return ConstraintMatrix((c.edge_ids for c in cycles), graph.edge_count)


@dataclass
class QpSolution:
    rho: np.ndarray
    lam: np.ndarray
    keys: list
    modulus: float
    iterations: int
    max_violation: float
    converged: bool
    dual_trace: list = field(default_factory=list)

    @property
    def dual_value(self) -> float:
        return float(self.lam.sum() - self.rho @ self.rho)

    @property
    def duality_gap(self) -> float:
        return abs(float(self.lam.sum() - 2.0 * (self.rho @ self.rho)))


def _warm_lambda(matrix: ConstraintMatrix, warm: Optional[QpSolution]) -> np.ndarray:
    lam = np.zeros(len(matrix))
    if warm is None:
        return lam
    for key, value in zip(warm.keys, warm.lam):
        r = matrix.row_index(key)
        if r is not None:
            lam[r] = value
    return lam


def solve(
    matrix: ConstraintMatrix,
    warm: Optional[QpSolution] = None,
    tolerance: float = 1e-8,
    max_iters: Optional[int] = None,
) -> QpSolution:
    """Hildreth dual coordinate ascent.

    ``max_iters`` counts full passes over the rows (default ``200 * rows``).
    Stops once the worst row violation, the largest multiplier change in the
    last pass and the duality gap are all within ``tolerance``. On hitting
    the pass limit the last iterate is returned with ``converged=False``.
    """
    if len(matrix) == 0:
        raise ValueError("constraint matrix has no rows")
    if not tolerance > 0:
        raise ValueError("tolerance must be positive")
    if max_iters is None:
        max_iters = 200 * len(matrix)
    lam = _warm_lambda(matrix, warm)
    rho = matrix.transpose_dot(lam) / 2.0
    trace = [float(lam.sum() - rho @ rho)]
    converged = False
    passes = 0
    violation = float(np.max(1.0 - matrix.lengths(rho)))
    while passes < max_iters:
        change = _hildreth_pass(matrix.indptr, matrix.indices, lam, rho)
        passes += 1
        trace.append(float(lam.sum() - rho @ rho))
        violation = float(np.max(1.0 - matrix.lengths(rho)))
        if change <= tolerance and violation <= tolerance:
            # the running rho accumulates rounding; re-derive before the gap test
            rho = matrix.transpose_dot(lam) / 2.0
            violation = float(np.max(1.0 - matrix.lengths(rho)))
            gap = abs(float(lam.sum() - 2.0 * (rho @ rho)))
            if violation <= tolerance and gap <= tolerance:
                converged = True
                break
    if not converged:
        logger.warning("QP stopped after %d passes without converging (violation %.3g)", passes, violation)
    rho = matrix.transpose_dot(lam) / 2.0
    violation = float(np.max(1.0 - matrix.lengths(rho)))
    return QpSolution(
        rho=rho,
        lam=lam,
        keys=list(matrix.keys),
        modulus=float(rho @ rho),
        iterations=passes,
        max_violation=violation,
        converged=converged,
        dual_trace=trace,
    )
