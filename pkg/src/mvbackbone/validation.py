"""Input checks shared by the estimators and the functional API."""

from __future__ import annotations

import math
from decimal import ROUND_HALF_UP, Decimal
from numbers import Real

from .community import Cover, Partition
from .graph import WeightedGraph


def check_graph(g, min_nodes: int = 1) -> WeightedGraph:
    if not isinstance(g, WeightedGraph):
        raise TypeError(f"expected a WeightedGraph, got {type(g).__name__}")
    if g.n_nodes < min_nodes:
        raise ValueError(f"graph has {g.n_nodes} node(s); at least {min_nodes} required")
    return g


def check_partition(p, g: WeightedGraph) -> Partition:
    if not isinstance(p, Partition):
        raise TypeError(f"expected a Partition, got {type(p).__name__}")
    missing = [v for v in g.nodes if v not in p.assignment]
    if missing:
        raise ValueError(f"partition does not cover node(s) {missing[:5]}")
    return p


def check_cover(cover, g: WeightedGraph) -> Cover:
    if not isinstance(cover, Cover):
        raise TypeError(f"expected a Cover, got {type(cover).__name__}")
    missing = [v for v in g.nodes if v not in cover.memberships]
    if missing:
        raise ValueError(f"cover does not cover node(s) {missing[:5]}")
    return cover


def check_fraction(target_fraction) -> float:
    if not isinstance(target_fraction, Real) or not math.isfinite(target_fraction):
        raise ValueError(f"target_fraction must be a real number, got {target_fraction!r}")
    if not 0 < target_fraction <= 1:
        raise ValueError(f"target_fraction must lie in (0, 1], got {target_fraction}")
    return float(target_fraction)


def check_alpha(alpha) -> float:
    if not isinstance(alpha, Real) or not 0 < alpha < 1:
        raise ValueError(f"alpha must lie in (0, 1), got {alpha!r}")
    return float(alpha)


def target_size(target_fraction: float, n_nodes: int) -> int:
    """Round ``target_fraction * n_nodes`` half-up to a node count."""
    exact = Decimal(repr(check_fraction(target_fraction))) * n_nodes
    return int(exact.quantize(Decimal(1), rounding=ROUND_HALF_UP))
