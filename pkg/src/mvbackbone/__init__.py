"""Modularity vitality backbone extraction for weighted networks."""

__version__ = "0.1.0"

from .backbone import (
    BackboneResult,
    BackboneSpec,
    NoOverlappingNodesError,
    disparity_filter,
    extract_mv_backbone,
    extract_overlapping_ego_backbone,
    extract_overlapping_hubs_backbone,
)
from .community import (
    Cover,
    Partition,
    best_louvain,
    clique_percolation_cover,
    community_accounting,
    louvain,
    weighted_modularity,
)
from .datasets import load_dataset, load_karate, load_les_miserables
from .estimators import (
    DisparityFilter,
    LouvainCommunities,
    ModularityVitalityBackbone,
    OverlappingEgoBackbone,
    OverlappingHubsBackbone,
)
from .graph import ParseError, WeightedGraph, load_edge_list
from .vitality import (
    VitalityScores,
    modularity_vitality,
    modularity_vitality_bruteforce,
    rank_by_absolute_vitality,
)

__all__ = [
    "BackboneResult",
    "BackboneSpec",
    "Cover",
    "DisparityFilter",
    "LouvainCommunities",
    "ModularityVitalityBackbone",
    "NoOverlappingNodesError",
    "OverlappingEgoBackbone",
    "OverlappingHubsBackbone",
    "ParseError",
    "Partition",
    "VitalityScores",
    "WeightedGraph",
    "best_louvain",
    "clique_percolation_cover",
    "community_accounting",
    "disparity_filter",
    "extract_mv_backbone",
    "extract_overlapping_ego_backbone",
    "extract_overlapping_hubs_backbone",
    "load_dataset",
    "load_edge_list",
    "load_karate",
    "load_les_miserables",
    "louvain",
    "modularity_vitality",
    "modularity_vitality_bruteforce",
    "rank_by_absolute_vitality",
    "weighted_modularity",
]
