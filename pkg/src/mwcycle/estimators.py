"""scikit-learn style wrappers around the cycle search and the modulus solver."""

from __future__ import annotations

import numpy as np
from sklearn.base import BaseEstimator, TransformerMixin
from sklearn.exceptions import NotFittedError

from .modulus import ModulusConfig, compute_modulus
from .mwc import find_mwc
from .pruning import PruneConfig
from .validation import check_graph


def _prune_config(prune, prune_dist, prune_interval, prune_min_frac) -> PruneConfig:
    return PruneConfig(bool(prune), prune_interval, prune_dist, prune_min_frac)


class MinimumWeightCycle(BaseEstimator):
    """Weighted girth of a graph.

    After ``fit``: ``gamma_`` (inf for forests), ``cycle_`` (vertex ids of a
    minimum cycle or None), ``witness_`` (its :class:`CycleRecord`) and
    ``stats_`` (operation counters).
    """

    def __init__(
        self,
        discarding=True,
        prune=False,
        prune_dist=3,
        prune_interval=5,
        prune_min_frac=0.3,
        order="id",
    ):
        self.discarding = discarding
        self.prune = prune
        self.prune_dist = prune_dist
        self.prune_interval = prune_interval
        self.prune_min_frac = prune_min_frac
        self.order = order

    def fit(self, X, y=None):
        graph = check_graph(X)
        result = find_mwc(
            graph,
            discarding=self.discarding,
            pruning=_prune_config(self.prune, self.prune_dist, self.prune_interval, self.prune_min_frac),
            order=self.order,
        )
        self.graph_ = graph
        self.gamma_ = result.gamma
        self.witness_ = result.witness
        self.cycle_ = None if result.witness is None else list(result.witness.vertices)
        self.stats_ = result.stats.as_dict()
        self.discarded_ = sorted(result.discarded)
        return self


class LoopModulus(TransformerMixin, BaseEstimator, auto_wrap_output_keys=None):
    """p=2 loop modulus; ``transform`` returns the optimal edge density."""

    def __init__(
        self,
        epsilon=1e-6,
        max_iters=None,
        init_target=None,
        cycles_per_iter=5,
        prune=True,
        prune_dist=3,
        prune_interval=5,
        prune_min_frac=0.3,
        qp_tolerance=1e-8,
    ):
        self.epsilon = epsilon
        self.max_iters = max_iters
        self.init_target = init_target
        self.cycles_per_iter = cycles_per_iter
        self.prune = prune
        self.prune_dist = prune_dist
        self.prune_interval = prune_interval
        self.prune_min_frac = prune_min_frac
        self.qp_tolerance = qp_tolerance

    def _config(self) -> ModulusConfig:
        return ModulusConfig(
            epsilon=self.epsilon,
            max_iters=self.max_iters,
            init_target=self.init_target,
            cycles_per_iter=self.cycles_per_iter,
            prune=_prune_config(self.prune, self.prune_dist, self.prune_interval, self.prune_min_frac),
            qp_tolerance=self.qp_tolerance,
        )

    def fit(self, X, y=None):
        graph = check_graph(X)
        result = compute_modulus(graph, self._config())
        self.graph_ = graph
        self.result_ = result
        self.modulus_ = result.modulus
        self.rho_ = result.rho
        self.constraints_ = [list(c.vertices) for c in result.constraints]
        self.converged_ = result.converged
        self.n_qp_solves_ = result.qp_solves
        self.n_iter_ = result.iterations
        return self

    def transform(self, X=None):
        """Per-edge density in edge-id order of the fitted graph.

        ``X`` must be the fitted graph (or None); the density is a property of
        that graph, not of new samples.
        """
        if not hasattr(self, "rho_"):
            raise NotFittedError("LoopModulus is not fitted yet; call fit first")
        if X is not None and check_graph(X) != self.graph_:
            raise ValueError("transform expects the graph passed to fit")
        return np.array(self.rho_, copy=True)
