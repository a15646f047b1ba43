"""Node- and edge-filtering backbone extractors.

Four methods share one result type:

* ``modularity_vitality``: repeatedly drop the node with the smallest
  absolute modularity vitality, keeping the largest connected component.
* ``overlapping_ego``: keep overlapping nodes of a cover together with their
  one-step neighbours.
* ``overlapping_hubs``: keep overlapping nodes, then the strongest remaining
  nodes.
* ``disparity``: keep edges that are significant under the uniform null
  model of weight allocation (Serrano et al. 2009).
"""

from __future__ import annotations

from collections import deque
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable

from .community import Cover, Partition
from .graph import WeightedGraph
from .validation import check_alpha, check_cover, check_fraction, check_graph, check_partition, target_size
from .vitality import VitalityScores, modularity_vitality, rank_by_absolute_vitality

METHODS = ("modularity_vitality", "overlapping_ego", "overlapping_hubs", "disparity")

_ALIASES = {
    "mv": "modularity_vitality",
    "ego": "overlapping_ego",
    "oe": "overlapping_ego",
    "hubs": "overlapping_hubs",
    "oh": "overlapping_hubs",
    "df": "disparity",
}


def canonical_method(name: str) -> str:
    key = name.strip().lower().replace("-", "_")
    key = _ALIASES.get(key, key)
    if key not in METHODS:
        raise ValueError(f"unknown backbone method {name!r}; choose from {', '.join(METHODS)}")
    return key


class NoOverlappingNodesError(ValueError):
    pass


@dataclass(frozen=True)
class BackboneSpec:
    method: str = "modularity_vitality"
    target_fraction: float = 0.3
    alpha: float = 0.05
    seed: int = 0

    def __post_init__(self):
        object.__setattr__(self, "method", canonical_method(self.method))
        check_fraction(self.target_fraction)
        check_alpha(self.alpha)


@dataclass
class BackboneResult:
    graph: WeightedGraph
    removed_order: list[str] = field(default_factory=list)
    method_trace: list[str] = field(default_factory=list)
    method: str = "modularity_vitality"
    target_size: int | None = None

    def trace_lines(self) -> list[str]:
        lines = [f"removed\t{v}" for v in self.removed_order]
        lines += [f"trace\t{t}" for t in self.method_trace]
        return lines


def write_trace(result: BackboneResult, path: str | Path, header: Iterable[str] = ()) -> None:
    lines = [f"# {h}" for h in header]
    lines += result.trace_lines()
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _budget(g: WeightedGraph, target_fraction: float) -> int:
    s = target_size(target_fraction, g.n_nodes)
    if s < 2:
        raise ValueError(
            f"target size round({target_fraction} * {g.n_nodes}) = {s} is below 2 nodes"
        )
    return s


def _lcc_with_trace(sub: WeightedGraph, trace: list[str]) -> WeightedGraph:
    lcc = sub.largest_connected_component()
    if lcc.n_nodes < sub.n_nodes:
        kept = set(lcc.nodes)
        dropped = [v for v in sub.nodes if v not in kept]
        trace.append(f"lcc kept {lcc.n_nodes} of {sub.n_nodes} nodes; dropped {' '.join(dropped)}")
    return lcc


# modularity vitality -----------------------------------------------------------


def prune_in_order(g: WeightedGraph, order: list[str], size: int) -> BackboneResult:
    """Delete nodes in ``order`` until at most ``size`` remain.

    After each deletion the graph is cut down to its largest connected
    component if it fell apart; nodes lost that way count toward the budget
    and are skipped when their turn comes.
    """
    adj = [set(nb) for nb in g.adjacency_index()]
    alive = [True] * g.n_nodes
    count = g.n_nodes
    removed: list[str] = []
    trace: list[str] = []
    connected = g.is_connected()

    def components() -> list[list[int]]:
        seen = [not a for a in alive]
        comps = []
        for start in range(g.n_nodes):
            if seen[start]:
                continue
            seen[start] = True
            comp = [start]
            queue = deque([start])
            while queue:
                i = queue.popleft()
                for j in adj[i]:
                    if not seen[j]:
                        seen[j] = True
                        comp.append(j)
                        queue.append(j)
            comps.append(comp)
        comps.sort(key=len, reverse=True)
        return comps

    def still_connected(nbrs: list[int]) -> bool:
        # search from one former neighbour until every other one is reached
        if len(nbrs) <= 1:
            return True
        targets = set(nbrs[1:])
        seen = {nbrs[0]}
        queue = deque([nbrs[0]])
        while queue and targets:
            i = queue.popleft()
            for j in adj[i]:
                if j not in seen:
                    seen.add(j)
                    targets.discard(j)
                    queue.append(j)
        return not targets

    for label in order:
        if count <= size:
            break
        i = g.index(label)
        if not alive[i]:
            continue
        nbrs = sorted(adj[i])
        for j in nbrs:
            adj[j].discard(i)
        adj[i].clear()
        alive[i] = False
        count -= 1
        removed.append(label)
        if count == 0:
            break
        if connected and still_connected(nbrs):
            continue
        comps = components()
        if len(comps) > 1:
            dropped = sorted(j for comp in comps[1:] for j in comp)
            for j in dropped:
                for x in adj[j]:
                    adj[x].discard(j)
                adj[j].clear()
                alive[j] = False
            count -= len(dropped)
            trace.append(
                f"after removing {label}: lcc kept {len(comps[0])} nodes; "
                f"dropped {' '.join(g.label(j) for j in dropped)}"
            )
        connected = True

    keep = [g.label(i) for i in range(g.n_nodes) if alive[i]]
    if count < size:
        trace.append(f"lcc truncation overshot the budget: {count} < {size} nodes")
    return BackboneResult(g.induced_subgraph(keep), removed, trace, "modularity_vitality", size)


def extract_mv_backbone(
    g: WeightedGraph,
    p: Partition,
    spec: BackboneSpec | None = None,
    scores: VitalityScores | None = None,
) -> BackboneResult:
    """Modularity vitality backbone of ``g`` under partition ``p``.

    Vitality is scored once on the intact graph; the ranking is then consumed
    from the lowest absolute score upward.
    """
    spec = spec or BackboneSpec()
    check_graph(g, 2)
    check_partition(p, g)
    size = _budget(g, spec.target_fraction)
    if size >= g.n_nodes:
        return BackboneResult(g, [], [], "modularity_vitality", size)
    if scores is None:
        scores = modularity_vitality(g, p)
    return prune_in_order(g, rank_by_absolute_vitality(scores), size)


# overlapping-node baselines ----------------------------------------------------


def _overlapping_by_strength(g: WeightedGraph, cover: Cover) -> list[str]:
    ov = [v for v in g.nodes if cover.is_overlapping(v)]
    if not ov:
        raise NoOverlappingNodesError(
            "no overlapping nodes in the cover; supply a cover file or lower the clique size k"
        )
    return sorted(ov, key=lambda v: (-g.strength(v), v))


def _finish(g: WeightedGraph, selected: list[str], trace: list[str], method: str, size: int) -> BackboneResult:
    backbone = _lcc_with_trace(g.induced_subgraph(selected), trace)
    kept = set(backbone.nodes)
    removed = [v for v in g.nodes if v not in kept]
    return BackboneResult(backbone, removed, trace, method, size)


def extract_overlapping_ego_backbone(
    g: WeightedGraph, cover: Cover, spec: BackboneSpec | None = None
) -> BackboneResult:
    """Overlapping nodes plus their neighbours, strongest ego networks first.

    Ego networks are admitted in decreasing strength of their overlapping
    node; the last one admitted is cut by decreasing neighbour strength once
    the node budget is reached.
    """
    spec = spec or BackboneSpec("overlapping_ego")
    check_graph(g, 2)
    check_cover(cover, g)
    size = _budget(g, spec.target_fraction)
    trace: list[str] = []
    selected: list[str] = []
    chosen: set[str] = set()
    for hub in _overlapping_by_strength(g, cover):
        ego = [hub] + sorted(g.neighbors(hub), key=lambda v: (-g.strength(v), v))
        for v in ego:
            if len(selected) >= size:
                break
            if v not in chosen:
                chosen.add(v)
                selected.append(v)
        if len(selected) >= size:
            break
    if len(selected) < size:
        trace.append(f"ego candidates exhausted at {len(selected)} of {size} nodes")
    return _finish(g, selected, trace, "overlapping_ego", size)


def extract_overlapping_hubs_backbone(
    g: WeightedGraph, cover: Cover, spec: BackboneSpec | None = None
) -> BackboneResult:
    spec = spec or BackboneSpec("overlapping_hubs")
    check_graph(g, 2)
    check_cover(cover, g)
    size = _budget(g, spec.target_fraction)
    overlapping = _overlapping_by_strength(g, cover)
    if len(overlapping) >= size:
        selected = overlapping[:size]
    else:
        ov = set(overlapping)
        rest = sorted((v for v in g.nodes if v not in ov), key=lambda v: (-g.strength(v), v))
        selected = overlapping + rest[: size - len(overlapping)]
    return _finish(g, selected, [], "overlapping_hubs", size)


# disparity filter -----------------------------------------------------------------


def disparity_significance(g: WeightedGraph) -> dict[tuple[str, str], float]:
    """Smallest endpoint p-value of each edge under the disparity null model.

    For an endpoint i of degree k_i >= 2 the p-value is (1 - w_ij/s_i)^(k_i-1).
    Edges touching a degree-1 node get 0.0, so they survive every threshold.
    """
    out = {}
    for u, v, w in g.edges():
        best = 1.0
        for x in (u, v):
            k = g.degree(x)
            if k < 2:
                best = 0.0
                break
            best = min(best, (1.0 - w / g.strength(x)) ** (k - 1))
        out[(u, v)] = best
    return out


def disparity_filter(g: WeightedGraph, alpha: float = 0.05) -> BackboneResult:
    """Keep edges whose p-value is below ``alpha`` at one endpoint or more."""
    alpha = check_alpha(alpha)
    check_graph(g, 1)
    kept = [(u, v, g.weight(u, v)) for (u, v), pv in disparity_significance(g).items() if pv < alpha]
    touched = {x for u, v, _ in kept for x in (u, v)}
    nodes = [v for v in g.nodes if v in touched]
    backbone = WeightedGraph(nodes, kept)
    removed = [v for v in g.nodes if v not in touched]
    trace = [f"kept {len(kept)} of {g.n_edges} edges at alpha={alpha!r}"]
    return BackboneResult(backbone, removed, trace, "disparity", None)


def extract(
    g: WeightedGraph,
    spec: BackboneSpec,
    partition: Partition | None = None,
    cover: Cover | None = None,
) -> BackboneResult:
    """Dispatch on ``spec.method``."""
    if spec.method == "modularity_vitality":
        if partition is None:
            raise ValueError("modularity vitality extraction needs a partition")
        return extract_mv_backbone(g, partition, spec)
    if spec.method == "disparity":
        return disparity_filter(g, spec.alpha)
    if cover is None:
        raise ValueError(f"{spec.method} extraction needs a cover")
    if spec.method == "overlapping_ego":
        return extract_overlapping_ego_backbone(g, cover, spec)
    return extract_overlapping_hubs_backbone(g, cover, spec)
