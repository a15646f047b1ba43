"""Community structure: partitions, weighted modularity, Louvain and CPM covers."""

from __future__ import annotations

import math
import random
from dataclasses import dataclass, field
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

from .graph import ParseError, WeightedGraph

LOUVAIN_TOLERANCE = 1e-9


@dataclass(frozen=True)
class Partition:
    """Non-overlapping assignment of node labels to contiguous community ids."""

    assignment: Mapping[str, int]

    def __post_init__(self):
        ids = set(self.assignment.values())
        if ids != set(range(len(ids))):
            raise ValueError("community ids must be contiguous from 0")

    @classmethod
    def from_labels(cls, assignment: Mapping[str, object]) -> "Partition":
        """Relabel arbitrary community keys to 0..n_c-1 in order of first appearance."""
        remap: dict[object, int] = {}
        out = {}
        for node, c in assignment.items():
            if c not in remap:
                remap[c] = len(remap)
            out[node] = remap[c]
        return cls(out)

    @classmethod
    def from_communities(cls, communities: Iterable[Iterable[str]]) -> "Partition":
        out: dict[str, int] = {}
        for c, members in enumerate(communities):
            for node in members:
                if node in out:
                    raise ValueError(f"node {node!r} appears in more than one community")
                out[node] = c
        return cls.from_labels(out)

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment.values()))

    def __getitem__(self, node: str) -> int:
        return self.assignment[node]

    def __len__(self) -> int:
        return len(self.assignment)

    def communities(self) -> list[list[str]]:
        groups: list[list[str]] = [[] for _ in range(self.n_communities)]
        for node, c in self.assignment.items():
            groups[c].append(node)
        return groups

    def restrict(self, nodes: Iterable[str]) -> "Partition":
        """Partition of a node subset, ids compacted."""
        return Partition.from_labels({v: self.assignment[v] for v in nodes})

    def as_index_array(self, g: WeightedGraph) -> np.ndarray:
        """Community id per node index of ``g``; raises if a node is missing."""
        missing = [v for v in g.nodes if v not in self.assignment]
        if missing:
            raise ValueError(f"partition does not cover node(s) {missing[:5]}")
        return np.array([self.assignment[v] for v in g.nodes], dtype=np.int64)


@dataclass(frozen=True)
class Cover:
    """Possibly overlapping community memberships."""

    memberships: Mapping[str, frozenset[int]]

    def __post_init__(self):
        for node, cs in self.memberships.items():
            if not cs:
                raise ValueError(f"node {node!r} has an empty membership")

    @property
    def overlapping_nodes(self) -> list[str]:
        return [v for v, cs in self.memberships.items() if len(cs) >= 2]

    def is_overlapping(self, node: str) -> bool:
        return len(self.memberships.get(node, ())) >= 2

    @classmethod
    def from_partition(cls, p: Partition) -> "Cover":
        return cls({v: frozenset([c]) for v, c in p.assignment.items()})


@dataclass
class CommunityAccounting:
    """Per-community internal and boundary weight."""

    internal: np.ndarray  # weight of edges with both ends in c
    external: np.ndarray  # weight of edges with exactly one end in c
    total_weight: float
    labels: np.ndarray = field(repr=False)  # community id per node index

    @property
    def n_communities(self) -> int:
        return len(self.internal)

    @property
    def total_strength(self) -> np.ndarray:
        return 2.0 * self.internal + self.external

    def modularity(self) -> float:
        if self.total_weight <= 0:
            return 0.0
        w = self.total_weight
        return float(np.sum(self.internal / w - (self.total_strength / (2.0 * w)) ** 2))


def community_accounting(g: WeightedGraph, p: Partition) -> CommunityAccounting:
    labels = p.as_index_array(g)
    n_c = int(labels.max()) + 1 if len(labels) else 0
    u, v, w = g.edge_arrays()
    same = labels[u] == labels[v]
    # bincount with no weights returns ints, hence the casts
    internal = np.bincount(labels[u][same], weights=w[same], minlength=n_c).astype(float)
    cross = ~same
    external = np.bincount(labels[u][cross], weights=w[cross], minlength=n_c) + np.bincount(
        labels[v][cross], weights=w[cross], minlength=n_c
    )
    external = external.astype(float)
    return CommunityAccounting(internal, external, g.total_weight, labels)


def weighted_modularity(g: WeightedGraph, p: Partition) -> float:
    """Newman modularity of ``p`` on the weighted graph ``g``.

    Computed per community as sum_c [in_c / W - (tot_c / 2W)^2]. Defined as
    0.0 for a graph without edges.
    """
    return community_accounting(g, p).modularity()


def modularity_dense(adjacency: np.ndarray, labels: np.ndarray) -> float:
    """Modularity by the explicit double sum over node pairs.

    Independent of :func:`weighted_modularity`; used as a cross-check and by
    the brute-force vitality oracle.
    """
    two_w = adjacency.sum()
    if two_w <= 0:
        return 0.0
    k = adjacency.sum(axis=1)
    delta = labels[:, None] == labels[None, :]
    return float(((adjacency - np.outer(k, k) / two_w) * delta).sum() / two_w)


# Louvain ---------------------------------------------------------------------


def _move_nodes(links, k, m, comm, order, tol) -> bool:
    """Local-move phase, in place on ``comm``. Returns whether any node moved.

    Candidates are the neighbouring communities and, when the node shares its
    community, an empty one.
    """
    n = len(links)
    tot = [0.0] * n
    size = [0] * n
    for i, c in enumerate(comm):
        tot[c] += k[i]
        size[c] += 1
    empty = [c for c in range(n) if size[c] == 0]
    two_m = 2.0 * m
    moved = False
    while True:
        moves = 0
        for i in order:
            ki = k[i]
            ci = comm[i]
            weights: dict[int, float] = {}
            for j, w in links[i].items():
                cj = comm[j]
                weights[cj] = weights.get(cj, 0.0) + w
            tot[ci] -= ki
            size[ci] -= 1
            best_c = ci
            best_gain = (weights.get(ci, 0.0) - tot[ci] * ki / two_m) / m
            for c, wic in weights.items():
                if c == ci:
                    continue
                gain = (wic - tot[c] * ki / two_m) / m
                if gain > best_gain + tol:
                    best_c, best_gain = c, gain
            if size[ci] > 0 and empty and 0.0 > best_gain + tol:
                best_c = empty[-1]
            if best_c != ci:
                if empty and best_c == empty[-1]:
                    empty.pop()
                if size[ci] == 0:
                    empty.append(ci)
                comm[i] = best_c
                moves += 1
            tot[best_c] += ki
            size[best_c] += 1
        if moves == 0:
            return moved
        moved = True


def _aggregate(links, loops, comm):
    remap: dict[int, int] = {}
    for c in comm:
        if c not in remap:
            remap[c] = len(remap)
    n2 = len(remap)
    new_links: list[dict[int, float]] = [{} for _ in range(n2)]
    new_loops = [0.0] * n2
    for i, nb in enumerate(links):
        ci = remap[comm[i]]
        new_loops[ci] += loops[i]
        for j, w in nb.items():
            cj = remap[comm[j]]
            if ci == cj:
                if i < j:
                    new_loops[ci] += w
            else:
                new_links[ci][cj] = new_links[ci].get(cj, 0.0) + w
    return new_links, new_loops, [remap[c] for c in comm]


def louvain(g: WeightedGraph, seed: int = 0, tol: float = LOUVAIN_TOLERANCE) -> Partition:
    """Louvain modularity optimisation (resolution 1).

    ``seed`` shuffles the node visit order at every level, so equal seeds give
    equal partitions. A node moves only when the modularity gain beats the
    current best option by more than ``tol``.
    """
    if g.n_nodes == 0:
        raise ValueError("cannot detect communities on an empty graph")
    rng = random.Random(seed)
    base_links = g.adjacency_index()
    base_loops = [0.0] * g.n_nodes
    base_k = list(g.strengths())
    m = g.total_weight
    membership = list(range(g.n_nodes))

    def shuffled(n):
        order = list(range(n))
        rng.shuffle(order)
        return order

    first = True
    while m > 0:
        # node-level moves on the input graph, so the result is also a local
        # optimum for single-node moves and not only at the aggregate level
        comm = list(membership)
        if not _move_nodes(base_links, base_k, m, comm, shuffled(g.n_nodes), tol) and not first:
            break
        first = False
        links, loops, membership = _aggregate(base_links, base_loops, comm)
        while True:
            k = [math.fsum(nb.values()) + 2.0 * lp for nb, lp in zip(links, loops)]
            sub = list(range(len(links)))
            if not _move_nodes(links, k, m, sub, shuffled(len(links)), tol):
                break
            links, loops, sub = _aggregate(links, loops, sub)
            membership = [sub[c] for c in membership]
    return Partition.from_labels({lab: membership[i] for i, lab in enumerate(g.nodes)})


def best_louvain(
    g: WeightedGraph, restarts: int = 20, seed: int = 0, tol: float = LOUVAIN_TOLERANCE
) -> tuple[Partition, float, int]:
    """Run Louvain with seeds ``seed .. seed+restarts-1`` and keep the best.

    Returns ``(partition, modularity, winning_seed)``. Later seeds replace the
    incumbent only on a strict improvement beyond 1e-12.
    """
    if restarts < 1:
        raise ValueError("restarts must be >= 1")
    best = None
    for s in range(seed, seed + restarts):
        p = louvain(g, seed=s, tol=tol)
        q = weighted_modularity(g, p)
        if best is None or q > best[1] + 1e-12:
            best = (p, q, s)
    return best


# clique percolation ----------------------------------------------------------


def _maximal_cliques(adj: list[set[int]]) -> list[list[int]]:
    """Bron-Kerbosch with pivoting; returns sorted cliques."""
    out: list[list[int]] = []
    stack = [([], set(range(len(adj))), set())]
    while stack:
        r, p, x = stack.pop()
        if not p and not x:
            out.append(sorted(r))
            continue
        if not p:
            continue
        pivot = max(p | x, key=lambda u: len(adj[u] & p))
        for v in sorted(p - adj[pivot]):
            stack.append((r + [v], p & adj[v], x & adj[v]))
            p = p - {v}
            x = x | {v}
    return out


def clique_percolation_cover(g: WeightedGraph, k: int = 3) -> Cover:
    """Clique percolation (k-clique communities) on the unweighted skeleton.

    Two k-cliques are adjacent when they share k-1 nodes; communities are the
    unions of connected k-cliques. Nodes in no k-clique become singleton
    communities. Community ids are ordered by their smallest node index.
    """
    if k < 3:
        raise ValueError("clique percolation needs k >= 3")
    adj = [set(nb) for nb in g.adjacency_index()]
    cliques = [c for c in _maximal_cliques(adj) if len(c) >= k]
    # percolating maximal cliques of size >= k sharing >= k-1 nodes gives the
    # same communities as percolating the k-cliques themselves
    parent = list(range(len(cliques)))

    def find(a):
        while parent[a] != a:
            parent[a] = parent[parent[a]]
            a = parent[a]
        return a

    by_node: dict[int, list[int]] = {}
    for ci, clique in enumerate(cliques):
        for v in clique:
            by_node.setdefault(v, []).append(ci)
    sets = [set(c) for c in cliques]
    for ci in range(len(cliques)):
        candidates = {cj for v in cliques[ci] for cj in by_node[v] if cj > ci}
        for cj in candidates:
            if len(sets[ci] & sets[cj]) >= k - 1:
                ra, rb = find(ci), find(cj)
                if ra != rb:
                    parent[max(ra, rb)] = min(ra, rb)
    groups: dict[int, set[int]] = {}
    for ci, clique in enumerate(cliques):
        groups.setdefault(find(ci), set()).update(clique)
    communities = [sorted(s) for s in groups.values()]
    covered = set().union(*groups.values()) if groups else set()
    communities.extend([v] for v in range(g.n_nodes) if v not in covered)
    communities.sort(key=lambda c: c[0])
    members: dict[int, set[int]] = {v: set() for v in range(g.n_nodes)}
    for cid, comm in enumerate(communities):
        for v in comm:
            members[v].add(cid)
    return Cover({g.label(v): frozenset(cs) for v, cs in members.items()})


# I/O ----------------------------------------------------------------------------


def parse_cover(lines: Iterable[str], path: str | None = None) -> Cover:
    memberships: dict[str, frozenset[int]] = {}
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        parts = line.split()
        if len(parts) != 2:
            raise ParseError("expected 'label c1[,c2,...]'", lineno, path)
        label, spec = parts
        try:
            cs = frozenset(int(tok) for tok in spec.split(",") if tok)
        except ValueError:
            raise ParseError(f"community ids must be integers, got {spec!r}", lineno, path) from None
        if not cs:
            raise ParseError(f"node {label!r} has an empty membership", lineno, path)
        if any(c < 0 for c in cs):
            raise ParseError("community ids must be non-negative", lineno, path)
        if label in memberships:
            raise ParseError(f"node {label!r} listed twice", lineno, path)
        memberships[label] = cs
    return Cover(memberships)


def load_cover(path: str | Path, graph: WeightedGraph | None = None) -> Cover:
    """Read a ``label c1[,c2,...]`` file; optionally check labels against a graph."""
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        cover = parse_cover(fh, str(path))
    if graph is not None:
        unknown = [v for v in cover.memberships if v not in graph]
        if unknown:
            raise ParseError(f"unknown node label(s) {unknown[:5]}", path=str(path))
        missing = [v for v in graph.nodes if v not in cover.memberships]
        if missing:
            raise ParseError(f"cover misses node(s) {missing[:5]}", path=str(path))
    return cover


def load_partition(path: str | Path, graph: WeightedGraph | None = None) -> Partition:
    cover = load_cover(path, graph)
    multi = cover.overlapping_nodes
    if multi:
        raise ParseError(f"partition file has overlapping node(s) {multi[:5]}", path=str(path))
    return Partition.from_labels({v: next(iter(cs)) for v, cs in cover.memberships.items()})


def save_partition(p: Partition, path: str | Path, header: Iterable[str] = ()) -> None:
    lines = [f"# {h}" for h in header]
    lines += [f"{v} {c}" for v, c in p.assignment.items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def save_cover(cover: Cover, path: str | Path, header: Iterable[str] = ()) -> None:
    lines = [f"# {h}" for h in header]
    lines += [f"{v} {','.join(str(c) for c in sorted(cs))}" for v, cs in cover.memberships.items()]
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")

