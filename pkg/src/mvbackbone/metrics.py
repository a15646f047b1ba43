"""Backbone quality measures and descriptive network statistics."""

from __future__ import annotations

import csv
import io
import math
import random
from collections import deque
from dataclasses import asdict, dataclass
from typing import Mapping, Sequence

import numpy as np
from scipy.sparse.csgraph import shortest_path

from .backbone import BackboneResult
from .community import Partition, best_louvain, weighted_modularity
from .graph import WeightedGraph


def _require_nodes(g: WeightedGraph, n: int = 1) -> None:
    if g.n_nodes < n:
        raise ValueError(f"graph has {g.n_nodes} node(s); need at least {n}")


def avg_weighted_degree(g: WeightedGraph) -> float:
    """Mean node strength."""
    _require_nodes(g)
    return float(np.mean(g.strengths()))


def avg_link_weight(g: WeightedGraph) -> float:
    """Total weight over unordered node pairs, divided by the node count."""
    _require_nodes(g)
    return g.total_weight / g.n_nodes


def betweenness(g: WeightedGraph, sample_sources: int | None = None, seed: int = 0) -> np.ndarray:
    """Normalised shortest-path betweenness on the unweighted skeleton.

    Brandes accumulation, one BFS per source. Values are divided by
    (N-1)(N-2)/2, the number of pairs a node can sit between. With
    ``sample_sources`` the sum is estimated from a seeded subset of sources
    and rescaled by N / sample size.
    """
    n = g.n_nodes
    adj = [list(nb) for nb in g.adjacency_index()]
    bc = np.zeros(n)
    sources = range(n)
    if sample_sources is not None and sample_sources < n:
        sources = random.Random(seed).sample(range(n), sample_sources)
    for s in sources:
        stack = []
        preds: list[list[int]] = [[] for _ in range(n)]
        sigma = [0] * n
        sigma[s] = 1
        dist = [-1] * n
        dist[s] = 0
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            for w in adj[v]:
                if dist[w] < 0:
                    dist[w] = dist[v] + 1
                    queue.append(w)
                if dist[w] == dist[v] + 1:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = [0.0] * n
        while stack:
            w = stack.pop()
            for v in preds[w]:
                delta[v] += sigma[v] / sigma[w] * (1.0 + delta[w])
            if w != s:
                bc[w] += delta[w]
    if sample_sources is not None and sample_sources < n:
        bc *= n / sample_sources
    # each unordered pair was counted from both ends
    bc /= 2.0
    if n > 2:
        bc /= (n - 1) * (n - 2) / 2.0
    else:
        bc[:] = 0.0
    return bc


def avg_betweenness(g: WeightedGraph, sample_sources: int | None = None, seed: int = 0) -> float:
    _require_nodes(g, 2)
    return float(np.mean(betweenness(g, sample_sources, seed)))


def backbone_modularity(g: WeightedGraph, seed: int = 0, restarts: int = 20) -> float:
    """Modularity of the best Louvain partition found on the backbone itself."""
    _require_nodes(g)
    return best_louvain(g, restarts=restarts, seed=seed)[1]


def density(g: WeightedGraph) -> float:
    n = g.n_nodes
    return 0.0 if n < 2 else 2.0 * g.n_edges / (n * (n - 1))


def transitivity(g: WeightedGraph) -> float:
    """3 x triangles / connected triples, ignoring weights."""
    adj = [set(nb) for nb in g.adjacency_index()]
    closed = 0
    triples = 0
    for i, nb in enumerate(adj):
        d = len(nb)
        triples += d * (d - 1) // 2
        for j in nb:
            if j > i:
                closed += len(nb & adj[j])
    # each triangle is seen once per edge, i.e. 3 times, and closes 3 triples
    return 0.0 if triples == 0 else closed / triples


def degree_assortativity(g: WeightedGraph) -> float:
    """Pearson correlation of the degrees at either end of an edge.

    NaN when every edge joins nodes of equal degree (zero variance).
    """
    deg = g.degrees()
    u, v, _ = g.edge_arrays()
    if len(u) == 0:
        return float("nan")
    x = np.concatenate([deg[u], deg[v]]).astype(float)
    y = np.concatenate([deg[v], deg[u]]).astype(float)
    sx, sy = x.std(), y.std()
    if sx == 0 or sy == 0:
        return float("nan")
    return float(np.mean((x - x.mean()) * (y - y.mean())) / (sx * sy))


def global_efficiency(g: WeightedGraph, chunk: int = 512) -> float:
    """Mean of 1/d(i, j) over ordered pairs, hop distances, 0 for unreachable pairs."""
    n = g.n_nodes
    if n < 2:
        return 0.0
    a = g.to_sparse()
    total = 0.0
    for start in range(0, n, chunk):
        idx = np.arange(start, min(start + chunk, n))
        d = shortest_path(a, directed=False, unweighted=True, indices=idx)
        with np.errstate(divide="ignore"):
            inv = 1.0 / d
        inv[~np.isfinite(inv)] = 0.0
        total += inv.sum()
    return total / (n * (n - 1))


@dataclass
class MetricsReport:
    n_nodes: int
    n_edges: int
    avg_weighted_degree: float
    avg_link_weight: float
    avg_betweenness: float
    modularity: float
    density: float | None = None
    transitivity: float | None = None
    assortativity: float | None = None
    efficiency: float | None = None
    n_communities: int | None = None
    seed_used: int = 0

    def as_dict(self) -> dict:
        return asdict(self)


def backbone_metrics(
    g: WeightedGraph, seed: int = 0, restarts: int = 20, sample_sources: int | None = None
) -> MetricsReport:
    """The four comparison measures: <k>, <w>, <b> and re-detected Q."""
    _require_nodes(g, 2)
    return MetricsReport(
        n_nodes=g.n_nodes,
        n_edges=g.n_edges,
        avg_weighted_degree=avg_weighted_degree(g),
        avg_link_weight=avg_link_weight(g),
        avg_betweenness=avg_betweenness(g, sample_sources, seed),
        modularity=backbone_modularity(g, seed, restarts),
        seed_used=seed,
    )


def descriptive_stats(
    g: WeightedGraph,
    partition: Partition | None = None,
    seed: int = 0,
    restarts: int = 20,
    sample_sources: int | None = None,
) -> MetricsReport:
    """Full descriptive report. Q comes from ``partition`` when given."""
    _require_nodes(g, 2)
    if partition is None:
        partition, q, _ = best_louvain(g, restarts=restarts, seed=seed)
    else:
        q = weighted_modularity(g, partition)
    return MetricsReport(
        n_nodes=g.n_nodes,
        n_edges=g.n_edges,
        avg_weighted_degree=avg_weighted_degree(g),
        avg_link_weight=avg_link_weight(g),
        avg_betweenness=avg_betweenness(g, sample_sources, seed),
        modularity=q,
        density=density(g),
        transitivity=transitivity(g),
        assortativity=degree_assortativity(g),
        efficiency=global_efficiency(g),
        n_communities=partition.n_communities,
        seed_used=seed,
    )


# comparison tables -----------------------------------------------------------------

COMPARE_METRICS = ("k_avg", "w_avg", "b_avg", "Q")
CSV_COLUMNS = ("network", "method", "n_nodes", "n_edges", "k_avg", "w_avg", "b_avg", "Q", "seed")


@dataclass
class ComparisonRow:
    network: str
    method: str
    n_nodes: int
    n_edges: int
    k_avg: float
    w_avg: float
    b_avg: float
    Q: float
    seed: int


def compare_report(
    network: str,
    results: Mapping[str, BackboneResult],
    seed: int = 0,
    restarts: int = 20,
    sample_sources: int | None = None,
) -> list[ComparisonRow]:
    if not results:
        raise ValueError("nothing to compare")
    rows = []
    for method, res in results.items():
        m = backbone_metrics(res.graph, seed, restarts, sample_sources)
        rows.append(
            ComparisonRow(
                network, method, m.n_nodes, m.n_edges,
                m.avg_weighted_degree, m.avg_link_weight, m.avg_betweenness, m.modularity, seed,
            )
        )
    return rows


def winners(rows: Sequence[ComparisonRow]) -> set[tuple[int, str]]:
    """(row index, metric) pairs holding the best value within their network."""
    marks = set()
    by_net: dict[str, list[int]] = {}
    for i, r in enumerate(rows):
        by_net.setdefault(r.network, []).append(i)
    for idx in by_net.values():
        if len(idx) < 2:
            continue
        for metric in COMPARE_METRICS:
            vals = [round(getattr(rows[i], metric), 12) for i in idx]
            best = max(vals)
            marks.update((i, metric) for i, val in zip(idx, vals) if val == best)
    return marks


def format_comparison(rows: Sequence[ComparisonRow], digits: int = 2) -> str:
    """Plain-text table; the per-network winner of each metric is wrapped in ``**``."""
    marks = winners(rows)
    header = ["network", "method", "N", "|E|", "<k>", "<w>", "<b>", "Q"]
    body = []
    for i, r in enumerate(rows):
        cells = [r.network, r.method, str(r.n_nodes), str(r.n_edges)]
        for metric in COMPARE_METRICS:
            val = getattr(r, metric)
            txt = f"{val:.{digits if metric != 'b_avg' else max(digits, 3)}f}"
            cells.append(f"**{txt}**" if (i, metric) in marks else txt)
        body.append(cells)
    widths = [max(len(row[c]) for row in [header] + body) for c in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(header, widths)).rstrip()]
    lines.append("  ".join("-" * w for w in widths))
    lines += ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in body]
    return "\n".join(lines)


def comparison_csv(rows: Sequence[ComparisonRow]) -> str:
    buf = io.StringIO()
    writer = csv.writer(buf, lineterminator="\n")
    writer.writerow(CSV_COLUMNS)
    for r in rows:
        writer.writerow([r.network, r.method, r.n_nodes, r.n_edges, repr(r.k_avg),
                         repr(r.w_avg), repr(r.b_avg), repr(r.Q), r.seed])
    return buf.getvalue()


def format_stats(rows: Sequence[tuple[str, MetricsReport]]) -> str:
    """Table of descriptive statistics, one network per line."""
    header = ["network", "N", "|E|", "<k>", "density", "transitivity", "assortativity", "efficiency", "Q"]
    body = []
    for name, m in rows:
        def f(x, d=3):
            return "nan" if x is None or (isinstance(x, float) and math.isnan(x)) else f"{x:.{d}f}"
        body.append([name, str(m.n_nodes), str(m.n_edges), f(m.avg_weighted_degree, 2),
                     f(m.density, 4), f(m.transitivity), f(m.assortativity), f(m.efficiency), f(m.modularity)])
    widths = [max(len(row[c]) for row in [header] + body) for c in range(len(header))]
    lines = ["  ".join(cell.ljust(w) for cell, w in zip(header, widths)).rstrip()]
    lines += ["  ".join(cell.ljust(w) for cell, w in zip(row, widths)).rstrip() for row in body]
    return "\n".join(lines)
