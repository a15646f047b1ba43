"""Weighted undirected graph storage, edge-list I/O and connectivity helpers."""

from __future__ import annotations

import logging
import math
import re
from collections import deque
from pathlib import Path
from typing import Iterable, Mapping

import numpy as np

logger = logging.getLogger(__name__)

_SPLIT = re.compile(r"[\s,]+")


class ParseError(ValueError):
    """Malformed input file. Carries the offending line number."""

    def __init__(self, message: str, lineno: int | None = None, path: str | None = None):
        self.lineno = lineno
        self.path = path
        where = ""
        if path is not None:
            where = f"{path}:"
        if lineno is not None:
            where = f"{where}{lineno}: "
        elif where:
            where += " "
        super().__init__(f"{where}{message}")


class WeightedGraph:
    """Undirected, simple graph with strictly positive edge weights.

    Nodes are string labels. Internally each label maps to a dense integer
    index in order of first appearance; subgraphs keep the relative order of
    the parent, so "smallest index" is a stable tie-breaker across
    operations.

    Instances are treated as immutable: every mutating operation returns a
    new graph.
    """

    __slots__ = ("_labels", "_index", "_adj", "_total_weight", "_n_edges", "_strength", "_edge_arrays")

    def __init__(self, nodes: Iterable[str] = (), edges: Iterable[tuple[str, str, float]] = ()):
        self._labels: list[str] = []
        self._index: dict[str, int] = {}
        self._adj: list[dict[int, float]] = []
        for label in nodes:
            self._add_node(str(label))
        for u, v, w in edges:
            self._add_edge(str(u), str(v), float(w))
        self._finalize()

    # construction -------------------------------------------------------

    def _add_node(self, label: str) -> int:
        idx = self._index.get(label)
        if idx is None:
            idx = len(self._labels)
            self._index[label] = idx
            self._labels.append(label)
            self._adj.append({})
        return idx

    def _add_edge(self, u: str, v: str, w: float) -> None:
        if u == v:
            raise ValueError(f"self-loop on {u!r}")
        if not (math.isfinite(w) and w > 0):
            raise ValueError(f"edge ({u!r}, {v!r}) has non-positive or non-finite weight {w}")
        i, j = self._add_node(u), self._add_node(v)
        self._adj[i][j] = self._adj[i].get(j, 0.0) + w
        self._adj[j][i] = self._adj[i][j]

    def _finalize(self) -> None:
        self._strength = np.array([math.fsum(nb.values()) for nb in self._adj], dtype=float)
        us, vs, ws = [], [], []
        for i, nb in enumerate(self._adj):
            for j, w in nb.items():
                if i < j:
                    us.append(i)
                    vs.append(j)
                    ws.append(w)
        self._n_edges = len(ws)
        self._total_weight = math.fsum(ws)
        arrays = (np.asarray(us, dtype=np.int64), np.asarray(vs, dtype=np.int64), np.asarray(ws, dtype=float))
        for a in arrays:
            a.setflags(write=False)
        self._edge_arrays = arrays

    @classmethod
    def _from_parts(cls, labels: list[str], adj: list[dict[int, float]]) -> "WeightedGraph":
        g = cls.__new__(cls)
        g._labels = labels
        g._index = {lab: i for i, lab in enumerate(labels)}
        g._adj = adj
        g._finalize()
        return g

    # basic accessors ----------------------------------------------------

    @property
    def nodes(self) -> list[str]:
        return list(self._labels)

    @property
    def n_nodes(self) -> int:
        return len(self._labels)

    @property
    def n_edges(self) -> int:
        return self._n_edges

    @property
    def total_weight(self) -> float:
        """Sum of weights over the unordered edge set."""
        return self._total_weight

    def __len__(self) -> int:
        return len(self._labels)

    def __contains__(self, label: object) -> bool:
        return label in self._index

    def __repr__(self) -> str:
        return f"WeightedGraph(n_nodes={self.n_nodes}, n_edges={self.n_edges}, total_weight={self.total_weight:g})"

    def index(self, label: str) -> int:
        try:
            return self._index[label]
        except KeyError:
            raise KeyError(f"unknown node {label!r}") from None

    def label(self, idx: int) -> str:
        return self._labels[idx]

    def neighbors(self, label: str) -> dict[str, float]:
        i = self.index(label)
        return {self._labels[j]: w for j, w in self._adj[i].items()}

    def weight(self, u: str, v: str) -> float:
        """Weight of edge u-v, 0.0 when absent."""
        return self._adj[self.index(u)].get(self.index(v), 0.0)

    def degree(self, label: str) -> int:
        return len(self._adj[self.index(label)])

    def strength(self, label: str) -> float:
        return float(self._strength[self.index(label)])

    def strengths(self) -> np.ndarray:
        """Node strengths in index order (copy)."""
        return self._strength.copy()

    def degrees(self) -> np.ndarray:
        return np.array([len(nb) for nb in self._adj], dtype=np.int64)

    def edges(self) -> list[tuple[str, str, float]]:
        """Unordered edges as (u, v, w) with index(u) < index(v)."""
        return [
            (self._labels[i], self._labels[j], w)
            for i, nb in enumerate(self._adj)
            for j, w in sorted(nb.items())
            if i < j
        ]

    def edge_arrays(self) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
        """Index-based (u, v, w) arrays over the unordered edge set (read-only)."""
        return self._edge_arrays

    def adjacency_index(self) -> list[dict[int, float]]:
        """Index-based adjacency (read-only view; do not mutate)."""
        return self._adj

    def to_dense(self) -> np.ndarray:
        a = np.zeros((self.n_nodes, self.n_nodes))
        for i, nb in enumerate(self._adj):
            for j, w in nb.items():
                a[i, j] = w
        return a

    def to_sparse(self):
        from scipy.sparse import csr_matrix

        u, v, w = self.edge_arrays()
        n = self.n_nodes
        return csr_matrix(
            (np.concatenate([w, w]), (np.concatenate([u, v]), np.concatenate([v, u]))),
            shape=(n, n),
        )

    def __eq__(self, other: object) -> bool:
        if not isinstance(other, WeightedGraph):
            return NotImplemented
        if set(self._labels) != set(other._labels):
            return False
        return all(self.neighbors(lab) == other.neighbors(lab) for lab in self._labels)

    __hash__ = None  # type: ignore[assignment]

    # derived graphs -----------------------------------------------------

    def remove_node(self, label: str) -> "WeightedGraph":
        drop = self.index(label)
        keep = [i for i in range(self.n_nodes) if i != drop]
        return self._subgraph_by_index(keep)

    def induced_subgraph(self, keep: Iterable[str]) -> "WeightedGraph":
        wanted = {self.index(lab) for lab in keep}
        return self._subgraph_by_index(sorted(wanted))

    def _subgraph_by_index(self, keep: list[int]) -> "WeightedGraph":
        remap = {old: new for new, old in enumerate(keep)}
        adj = [
            {remap[j]: w for j, w in self._adj[old].items() if j in remap}
            for old in keep
        ]
        return WeightedGraph._from_parts([self._labels[i] for i in keep], adj)

    def scale_weights(self, factor: float) -> "WeightedGraph":
        if not (math.isfinite(factor) and factor > 0):
            raise ValueError("scale factor must be positive and finite")
        adj = [{j: w * factor for j, w in nb.items()} for nb in self._adj]
        return WeightedGraph._from_parts(list(self._labels), adj)

    def connected_components(self) -> list[list[int]]:
        """Components as sorted index lists, largest first, ties by smallest index."""
        seen = [False] * self.n_nodes
        comps = []
        for start in range(self.n_nodes):
            if seen[start]:
                continue
            seen[start] = True
            comp = [start]
            queue = deque([start])
            while queue:
                i = queue.popleft()
                for j in self._adj[i]:
                    if not seen[j]:
                        seen[j] = True
                        comp.append(j)
                        queue.append(j)
            comps.append(sorted(comp))
        # start indices increase, so a stable sort on size keeps the
        # smallest-index component first among equals
        comps.sort(key=len, reverse=True)
        return comps

    def is_connected(self) -> bool:
        return self.n_nodes == 0 or len(self.connected_components()) == 1

    def largest_connected_component(self) -> "WeightedGraph":
        if self.n_nodes == 0:
            return self
        comps = self.connected_components()
        if len(comps) == 1:
            return self
        return self._subgraph_by_index(comps[0])


# free-function aliases -----------------------------------------------------


def strength(g: WeightedGraph, v: str) -> float:
    return g.strength(v)


def remove_node(g: WeightedGraph, v: str) -> WeightedGraph:
    return g.remove_node(v)


def induced_subgraph(g: WeightedGraph, keep: Iterable[str]) -> WeightedGraph:
    return g.induced_subgraph(keep)


def largest_connected_component(g: WeightedGraph) -> WeightedGraph:
    return g.largest_connected_component()


# I/O ----------------------------------------------------------------------


def parse_edge_list(lines: Iterable[str], path: str | None = None) -> WeightedGraph:
    """Parse ``src dst [weight]`` lines (whitespace or comma separated).

    Duplicate edges are merged by summing weights. Self-loops are dropped and
    counted.
    """
    edges: dict[tuple[str, str], float] = {}
    order: list[str] = []
    seen: set[str] = set()
    self_loops = 0
    for lineno, raw in enumerate(lines, start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        tokens = [t for t in _SPLIT.split(line) if t]
        if len(tokens) not in (2, 3):
            raise ParseError(f"expected 'src dst [weight]', got {len(tokens)} field(s)", lineno, path)
        u, v = tokens[0], tokens[1]
        if len(tokens) == 3:
            try:
                w = float(tokens[2])
            except ValueError:
                raise ParseError(f"weight {tokens[2]!r} is not a number", lineno, path) from None
        else:
            w = 1.0
        if not math.isfinite(w) or w <= 0:
            raise ParseError(f"weight must be positive and finite, got {tokens[2]}", lineno, path)
        for lab in (u, v):
            if lab not in seen:
                seen.add(lab)
                order.append(lab)
        if u == v:
            self_loops += 1
            continue
        key = (u, v) if (u, v) in edges or (v, u) not in edges else (v, u)
        edges[key] = edges.get(key, 0.0) + w
    if self_loops:
        logger.warning("dropped %d self-loop(s)%s", self_loops, f" in {path}" if path else "")
    return WeightedGraph(order, ((u, v, w) for (u, v), w in edges.items()))


def load_edge_list(path: str | Path) -> WeightedGraph:
    path = Path(path)
    with path.open(encoding="utf-8") as fh:
        return parse_edge_list(fh, str(path))


def _check_label(label: str) -> None:
    if not label or _SPLIT.search(label) or label.startswith("#"):
        raise ValueError(f"node label {label!r} cannot be written to an edge list")


def write_edge_list(
    g: WeightedGraph, path: str | Path, header: Iterable[str] = ()
) -> None:
    """Write ``src dst weight`` lines. Isolated nodes are not representable."""
    lines = [f"# {h}" for h in header]
    lines.append(f"# nodes={g.n_nodes} edges={g.n_edges} total_weight={g.total_weight!r}")
    for u, v, w in g.edges():
        _check_label(u)
        _check_label(v)
        lines.append(f"{u} {v} {w!r}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")


def _dot_id(label: str) -> str:
    return '"' + label.replace("\\", "\\\\").replace('"', '\\"') + '"'


def write_dot(
    g: WeightedGraph,
    path: str | Path,
    communities: Mapping[str, int] | None = None,
    header: Iterable[str] = (),
) -> None:
    """Undirected DOT export; node width tracks strength, penwidth tracks weight."""
    s = g.strengths()
    s_max = float(s.max()) if g.n_nodes and s.max() > 0 else 1.0
    edges = g.edges()
    w_max = max((w for _, _, w in edges), default=1.0)
    out = [f"// {h}" for h in header]
    out.append("graph G {")
    out.append("  node [shape=circle, fixedsize=true, colorscheme=set312];")
    for i, lab in enumerate(g.nodes):
        attrs = [f"width={0.1 + 0.9 * s[i] / s_max:.4f}"]
        if communities is not None and lab in communities:
            attrs.append("style=filled")
            attrs.append(f"fillcolor={communities[lab] % 12 + 1}")
        out.append(f"  {_dot_id(lab)} [{', '.join(attrs)}];")
    for u, v, w in edges:
        out.append(f"  {_dot_id(u)} -- {_dot_id(v)} [penwidth={5.0 * w / w_max:.4f}, weight={w!r}];")
    out.append("}")
    Path(path).write_text("\n".join(out) + "\n", encoding="utf-8")


def export(g: WeightedGraph, fmt: str, path: str | Path, **kwargs) -> None:
    if fmt == "edgelist":
        write_edge_list(g, path, **kwargs)
    elif fmt == "dot":
        write_dot(g, path, **kwargs)
    else:
        raise ValueError(f"unknown export format {fmt!r}; expected 'edgelist' or 'dot'")
