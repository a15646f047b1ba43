import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvbackbone.community import Partition, best_louvain, louvain
from mvbackbone.graph import WeightedGraph
from mvbackbone.vitality import (
    VitalityScores,
    modularity_vitality,
    modularity_vitality_bruteforce,
    rank_by_absolute_vitality,
)

from conftest import random_weighted_graph, two_triangles_bridge

NATURAL = Partition.from_communities([["a", "b", "u"], ["x", "y", "z"]])


def test_single_community_all_zero(karate):
    p = Partition({v: 0 for v in karate.nodes})
    for scores in (modularity_vitality(karate, p), modularity_vitality_bruteforce(karate, p)):
        assert all(abs(a) < 1e-12 for a in scores.scores.values())


def test_bridge_graph_signs_and_values():
    g = two_triangles_bridge()
    fast = modularity_vitality(g, NATURAL)
    slow = modularity_vitality_bruteforce(g, NATURAL)
    # Q = 5/14; deleting a pure-internal node leaves Q = 11/50, deleting a
    # bridge endpoint leaves two disjoint pieces with Q = 3/8
    for v in "abyz":
        assert fast[v] == pytest.approx(5 / 14 - 11 / 50, abs=1e-12)
    for v in "ux":
        assert fast[v] == pytest.approx(5 / 14 - 3 / 8, abs=1e-12)
        assert fast[v] < 0
    for v in g.nodes:
        assert fast[v] == pytest.approx(slow[v], abs=1e-12)
    assert fast.base_modularity == pytest.approx(5 / 14, abs=1e-12)


def test_externally_linked_member():
    # v sits in community A but all its edges go to B
    g = WeightedGraph(
        edges=[
            ("a1", "a2", 1), ("a2", "a3", 1), ("a1", "a3", 1),
            ("b1", "b2", 1), ("b2", "b3", 1), ("b1", "b3", 1),
            ("a3", "b3", 1), ("v", "b1", 1), ("v", "b2", 1),
        ]
    )
    p = Partition.from_communities([["a1", "a2", "a3", "v"], ["b1", "b2", "b3"]])
    fast = modularity_vitality(g, p)
    slow = modularity_vitality_bruteforce(g, p)
    # Q = 1/6 before, 5/14 after deleting v
    assert slow["v"] == pytest.approx(-4 / 21, abs=1e-12)
    assert fast["v"] == pytest.approx(slow["v"], abs=1e-12)


def test_two_node_graph_convention():
    g = WeightedGraph(edges=[("a", "b", 2.0)])
    p = Partition({"a": 0, "b": 1})
    fast = modularity_vitality(g, p)
    slow = modularity_vitality_bruteforce(g, p)
    # Q = 0 - 2 * (1/2)^2 = -1/2; the emptied graph counts as Q = 0
    assert fast.base_modularity == pytest.approx(-0.5)
    assert fast["a"] == pytest.approx(-0.5) and fast["b"] == pytest.approx(-0.5)
    assert slow.scores == pytest.approx(fast.scores)


def test_needs_two_nodes():
    with pytest.raises(ValueError):
        modularity_vitality(WeightedGraph(nodes=["a"]), Partition({"a": 0}))


def test_partition_mismatch(karate):
    with pytest.raises(ValueError):
        modularity_vitality(karate, Partition({"1": 0, "2": 0}))


@pytest.mark.parametrize("seed", range(100))
def test_fast_matches_bruteforce_random(seed):
    rng = np.random.default_rng(1000 + seed)
    g = random_weighted_graph(rng, int(rng.integers(5, 26)), float(rng.uniform(0.1, 0.5)))
    if seed % 2:
        p = louvain(g, seed)
    else:
        labels = rng.integers(0, int(rng.integers(1, 5)), size=g.n_nodes)
        p = Partition.from_labels(dict(zip(g.nodes, labels.tolist())))
    fast = modularity_vitality(g, p)
    slow = modularity_vitality_bruteforce(g, p)
    assert len(fast) == g.n_nodes
    for v in g.nodes:
        assert abs(fast[v] - slow[v]) < 1e-9


def test_fast_matches_bruteforce_datasets(karate, lesmis):
    for g in (karate, lesmis):
        p, q, _ = best_louvain(g, restarts=5)
        fast = modularity_vitality(g, p)
        slow = modularity_vitality_bruteforce(g, p)
        assert abs(fast.base_modularity - q) < 1e-12
        assert max(abs(fast[v] - slow[v]) for v in g.nodes) < 1e-9


def test_two_cliques_bridge_extremes():
    k5a = [(f"a{i}", f"a{j}", 1) for i in range(5) for j in range(i + 1, 5)]
    k5b = [(f"b{i}", f"b{j}", 1) for i in range(5) for j in range(i + 1, 5)]
    g = WeightedGraph(edges=k5a + k5b + [("a0", "b0", 1)])
    p = Partition.from_labels({v: v[0] for v in g.nodes})
    s = modularity_vitality_bruteforce(g, p).scores
    assert min(s, key=s.get) in {"a0", "b0"}
    assert max(s, key=s.get) not in {"a0", "b0"}
    fast = modularity_vitality(g, p).scores
    assert fast == pytest.approx(s, abs=1e-12)


@settings(max_examples=40, deadline=None)
@given(st.integers(0, 10_000), st.floats(0.01, 1000))
def test_scale_invariance(seed, factor):
    rng = np.random.default_rng(seed)
    g = random_weighted_graph(rng, int(rng.integers(4, 20)), 0.4)
    p = louvain(g, 0)
    a = modularity_vitality(g, p)
    b = modularity_vitality(g.scale_weights(factor), p)
    for v in g.nodes:
        assert b[v] == pytest.approx(a[v], abs=1e-10)
    assert rank_by_absolute_vitality(a) == rank_by_absolute_vitality(b)


def test_rank_examples():
    assert rank_by_absolute_vitality({"a": -0.3, "b": 0.1, "c": 0.2}) == ["b", "c", "a"]
    assert rank_by_absolute_vitality({"c": 0.5, "a": 0.5, "b": 0.5}) == ["a", "b", "c"]
    assert rank_by_absolute_vitality({"b": 0.2, "a": -0.2}) == ["a", "b"]
    assert rank_by_absolute_vitality(VitalityScores({"x": 1.0}, 0.0)) == ["x"]
    with pytest.raises(ValueError):
        rank_by_absolute_vitality({})
