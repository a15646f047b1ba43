"""scikit-learn style wrappers around the functional API.

Estimators take a :class:`~mvbackbone.graph.WeightedGraph` as ``X``. ``fit``
learns what the method needs from the graph (a partition and vitality
ranking, a cover, or edge p-values); ``transform`` returns the backbone graph
and ``extract`` the full :class:`~mvbackbone.backbone.BackboneResult`.
"""

from __future__ import annotations

from sklearn.base import BaseEstimator, ClusterMixin, TransformerMixin
from sklearn.utils.validation import check_is_fitted

from .backbone import (
    BackboneResult,
    BackboneSpec,
    disparity_filter,
    disparity_significance,
    extract_overlapping_ego_backbone,
    extract_overlapping_hubs_backbone,
    prune_in_order,
)
from .community import Cover, Partition, best_louvain, clique_percolation_cover
from .graph import WeightedGraph
from .validation import check_alpha, check_cover, check_fraction, check_graph, check_partition, target_size
from .vitality import modularity_vitality, rank_by_absolute_vitality


def _check_known_nodes(g: WeightedGraph, known: frozenset[str]) -> None:
    unseen = [v for v in g.nodes if v not in known]
    if unseen:
        raise ValueError(f"node(s) {unseen[:5]} were not present at fit time")


class LouvainCommunities(ClusterMixin, BaseEstimator):
    """Best-of-``n_restarts`` Louvain partition.

    Attributes
    ----------
    partition_ : Partition
    modularity_ : float
    best_seed_ : int
    labels_ : list of int, community id per node in graph order
    """

    def __init__(self, n_restarts: int = 20, seed: int = 0):
        self.n_restarts = n_restarts
        self.seed = seed

    def fit(self, X, y=None):
        g = check_graph(X)
        self.partition_, self.modularity_, self.best_seed_ = best_louvain(g, self.n_restarts, self.seed)
        self.labels_ = [self.partition_[v] for v in g.nodes]
        return self

    def fit_predict(self, X, y=None) -> Partition:
        return self.fit(X).partition_


class ModularityVitalityBackbone(TransformerMixin, BaseEstimator):
    """Node-filtering backbone driven by absolute modularity vitality.

    Parameters
    ----------
    target_fraction : float, default 0.3
        Backbone size as a fraction of the input node count.
    n_restarts : int, default 20
        Louvain restarts used when ``fit`` is not given a partition.
    seed : int, default 0
        First Louvain seed.

    Attributes
    ----------
    partition_ : Partition
    scores_ : VitalityScores
    ranking_ : list of str
        Node labels, lowest absolute vitality first.
    """

    def __init__(self, target_fraction: float = 0.3, n_restarts: int = 20, seed: int = 0):
        self.target_fraction = target_fraction
        self.n_restarts = n_restarts
        self.seed = seed

    def fit(self, X, y=None, partition: Partition | None = None):
        g = check_graph(X, 2)
        check_fraction(self.target_fraction)
        if partition is None:
            partition = best_louvain(g, self.n_restarts, self.seed)[0]
        self.partition_ = check_partition(partition, g)
        self.scores_ = modularity_vitality(g, self.partition_)
        self.ranking_ = rank_by_absolute_vitality(self.scores_)
        self.nodes_in_ = frozenset(g.nodes)
        return self

    def extract(self, X) -> BackboneResult:
        check_is_fitted(self)
        g = check_graph(X, 2)
        _check_known_nodes(g, self.nodes_in_)
        size = target_size(self.target_fraction, g.n_nodes)
        if size < 2:
            raise ValueError(f"target size {size} is below 2 nodes")
        if size >= g.n_nodes:
            return BackboneResult(g, [], [], "modularity_vitality", size)
        order = [v for v in self.ranking_ if v in g]
        return prune_in_order(g, order, size)

    def transform(self, X) -> WeightedGraph:
        return self.extract(X).graph


class _CoverBackbone(TransformerMixin, BaseEstimator):
    _method = ""

    def __init__(self, target_fraction: float = 0.3, cpm_k: int = 3):
        self.target_fraction = target_fraction
        self.cpm_k = cpm_k

    def fit(self, X, y=None, cover: Cover | None = None):
        g = check_graph(X, 2)
        check_fraction(self.target_fraction)
        if cover is None:
            cover = clique_percolation_cover(g, self.cpm_k)
        self.cover_ = check_cover(cover, g)
        self.nodes_in_ = frozenset(g.nodes)
        return self

    def _run(self, g: WeightedGraph, cover: Cover, spec: BackboneSpec) -> BackboneResult:
        raise NotImplementedError

    def extract(self, X) -> BackboneResult:
        check_is_fitted(self)
        g = check_graph(X, 2)
        _check_known_nodes(g, self.nodes_in_)
        spec = BackboneSpec(self._method, self.target_fraction)
        return self._run(g, self.cover_, spec)

    def transform(self, X) -> WeightedGraph:
        return self.extract(X).graph


class OverlappingEgoBackbone(_CoverBackbone):
    """Overlapping nodes of a cover plus their one-step neighbours.

    Without an explicit ``cover`` at fit time, clique percolation with
    clique size ``cpm_k`` supplies one.
    """

    _method = "overlapping_ego"

    def _run(self, g, cover, spec):
        return extract_overlapping_ego_backbone(g, cover, spec)


class OverlappingHubsBackbone(_CoverBackbone):
    """Overlapping nodes of a cover, topped up with the strongest other nodes."""

    _method = "overlapping_hubs"

    def _run(self, g, cover, spec):
        return extract_overlapping_hubs_backbone(g, cover, spec)


class DisparityFilter(TransformerMixin, BaseEstimator):
    """Edge filter keeping links significant under the disparity null model.

    Attributes
    ----------
    significance_ : dict
        Edge ``(u, v)`` to its smallest endpoint p-value on the fitted graph.
    """

    def __init__(self, alpha: float = 0.05):
        self.alpha = alpha

    def fit(self, X, y=None):
        g = check_graph(X)
        check_alpha(self.alpha)
        self.significance_ = disparity_significance(g)
        return self

    def extract(self, X) -> BackboneResult:
        check_is_fitted(self)
        return disparity_filter(check_graph(X), self.alpha)

    def transform(self, X) -> WeightedGraph:
        return self.extract(X).graph
