import numpy as np
import pytest

from mvbackbone.backbone import (
    BackboneSpec,
    NoOverlappingNodesError,
    canonical_method,
    disparity_filter,
    disparity_significance,
    extract,
    extract_mv_backbone,
    extract_overlapping_ego_backbone,
    extract_overlapping_hubs_backbone,
    prune_in_order,
)
from mvbackbone.community import Cover, Partition, best_louvain, clique_percolation_cover, louvain
from mvbackbone.graph import WeightedGraph
from mvbackbone.validation import target_size

from conftest import random_weighted_graph, two_triangles_bridge

NATURAL = Partition.from_communities([["a", "b", "u"], ["x", "y", "z"]])


def shared_node_triangles():
    return WeightedGraph(edges=[("a", "b", 1), ("a", "x", 1), ("b", "x", 1), ("x", "c", 1), ("x", "d", 1), ("c", "d", 1)])


def weighted_star():
    return WeightedGraph(edges=[("c", "l1", 1), ("c", "l2", 2), ("c", "l3", 3), ("c", "l4", 4)])


def test_aliases():
    assert canonical_method("mv") == "modularity_vitality"
    assert canonical_method("OE") == "overlapping_ego"
    with pytest.raises(ValueError):
        canonical_method("nope")


@pytest.mark.parametrize("f, n, s", [(0.3, 34, 10), (0.3, 77, 23), (0.5, 5, 3), (0.25, 10, 3), (1.0, 7, 7)])
def test_target_size_rounds_half_up(f, n, s):
    assert target_size(f, n) == s


def test_spec_validation():
    for bad in (0.0, -0.1, 1.5, float("nan")):
        with pytest.raises(ValueError):
            BackboneSpec(target_fraction=bad)
    with pytest.raises(ValueError):
        BackboneSpec(alpha=1.0)


def test_mv_identity(karate):
    p, _, _ = best_louvain(karate, restarts=3)
    res = extract_mv_backbone(karate, p, BackboneSpec(target_fraction=1.0))
    assert res.graph == karate and res.removed_order == []


def test_mv_bridge_graph_keeps_one_triangle():
    g = two_triangles_bridge()
    res = extract_mv_backbone(g, NATURAL, BackboneSpec(target_fraction=0.5))
    # u has the smallest |alpha|; deleting it strands a and b
    assert res.removed_order == ["u"]
    assert res.graph.nodes == ["x", "y", "z"]
    assert res.graph.is_connected()
    assert any("dropped a b" in t for t in res.method_trace)


def test_mv_too_small_budget():
    g = two_triangles_bridge()
    with pytest.raises(ValueError):
        extract_mv_backbone(g, NATURAL, BackboneSpec(target_fraction=0.2))


def test_prune_skips_nodes_lost_to_lcc():
    g = two_triangles_bridge()
    res = prune_in_order(g, ["u", "a", "b", "x", "y", "z"], 2)
    assert res.removed_order == ["u", "x"]
    assert res.graph.nodes == ["y", "z"]


@pytest.mark.parametrize("seed", range(20))
def test_mv_size_bound_and_connected(seed):
    rng = np.random.default_rng(seed)
    g = random_weighted_graph(rng, 30, 0.12).largest_connected_component()
    p = louvain(g, seed)
    for f in (0.2, 0.3, 0.6):
        s = target_size(f, g.n_nodes)
        if s < 2:
            continue
        res = extract_mv_backbone(g, p, BackboneSpec(target_fraction=f))
        assert res.graph.n_nodes <= s
        assert res.graph.is_connected()
        if res.graph.n_nodes < s:
            assert any("overshot" in t for t in res.method_trace)


def test_ego_whole_graph():
    g = shared_node_triangles()
    cover = clique_percolation_cover(g, 3)
    res = extract_overlapping_ego_backbone(g, cover, BackboneSpec("ego", target_fraction=1.0))
    assert set(res.graph.nodes) == set(g.nodes)


def test_ego_truncates_by_neighbour_strength():
    g = WeightedGraph(edges=[("a", "b", 1), ("a", "x", 1), ("b", "x", 1), ("x", "c", 5), ("x", "d", 2), ("c", "d", 1)])
    cover = clique_percolation_cover(g, 3)
    res = extract_overlapping_ego_backbone(g, cover, BackboneSpec("ego", target_fraction=0.6))
    # neighbour strengths: c 6, d 3, a 2, b 2
    assert set(res.graph.nodes) == {"x", "c", "d"}


def test_ego_without_overlap_errors():
    tree = WeightedGraph(edges=[("r", "a", 1), ("r", "b", 1), ("a", "c", 1)])
    with pytest.raises(NoOverlappingNodesError, match="cover"):
        extract_overlapping_ego_backbone(tree, clique_percolation_cover(tree, 3), BackboneSpec("ego", target_fraction=0.5))


def test_ego_exhaustion_is_traced():
    g = shared_node_triangles()
    extra = WeightedGraph(edges=list(g.edges()) + [("d", "e", 1), ("e", "f", 1), ("f", "h", 1)])
    res = extract_overlapping_ego_backbone(extra, clique_percolation_cover(extra, 3), BackboneSpec("ego", target_fraction=1.0))
    assert any("exhausted" in t for t in res.method_trace)
    assert res.graph.n_nodes == 5


def test_hubs_star_center_plus_strongest_leaves():
    star = weighted_star()
    cover = Cover({"c": frozenset({0, 1}), "l1": frozenset({0}), "l2": frozenset({0}), "l3": frozenset({1}), "l4": frozenset({1})})
    res = extract_overlapping_hubs_backbone(star, cover, BackboneSpec("hubs", target_fraction=0.6))
    assert set(res.graph.nodes) == {"c", "l4", "l3"}


def test_hubs_overlap_exceeds_budget():
    star = weighted_star()
    cover = Cover({v: frozenset({0, 1}) for v in star.nodes})
    res = extract_overlapping_hubs_backbone(star, cover, BackboneSpec("hubs", target_fraction=0.6))
    # top-3 by strength: c(10), l4(4), l3(3)
    assert set(res.graph.nodes) == {"c", "l4", "l3"}


def test_dispatch_requires_inputs(karate):
    with pytest.raises(ValueError):
        extract(karate, BackboneSpec("mv"))
    with pytest.raises(ValueError):
        extract(karate, BackboneSpec("ego"))
    assert extract(karate, BackboneSpec("df", alpha=0.2)).method == "disparity"


# disparity ------------------------------------------------------------------------


def test_disparity_uniform_star_all_or_none():
    star = WeightedGraph(edges=[("c", f"l{i}", 1) for i in range(4)])
    sig = disparity_significance(star)
    # leaves have degree 1, so every edge is kept at any threshold
    assert set(sig.values()) == {0.0}
    ring = WeightedGraph(edges=[(f"n{i}", f"n{(i + 1) % 5}", 1) for i in range(5)])
    vals = set(disparity_significance(ring).values())
    assert vals == {0.5}
    assert disparity_filter(ring, 0.49).graph.n_edges == 0
    assert disparity_filter(ring, 0.51).graph.n_edges == 5


def test_disparity_dominant_edge():
    edges = [("h", "big", 100)] + [("h", f"s{i}", 1) for i in range(5)]
    edges += [("big", "q", 1), ("big", "r", 1)] + [(f"s{i}", f"t{i}", 1) for i in range(5)]
    g = WeightedGraph(edges=edges)
    sig = disparity_significance(g)
    at_h = {v: p for (u, v), p in sig.items() if u == "h"}
    assert min(at_h, key=at_h.get) == "big"
    # (1 - 100/105)^5 at h beats (1 - 100/102)^2 at big
    assert sig[("h", "big")] == pytest.approx((5 / 105) ** 5, rel=1e-12)
    kept = disparity_filter(g, 0.05).graph
    assert kept.weight("h", "big") == 100


def test_disparity_near_one_keeps_everything(lesmis):
    res = disparity_filter(lesmis, 1 - 1e-12)
    assert res.graph == lesmis


@pytest.mark.parametrize("seed", range(10))
def test_disparity_monotone(seed):
    rng = np.random.default_rng(seed)
    g = random_weighted_graph(rng, 25, 0.3)
    prev = set()
    for a in (0.01, 0.05, 0.2, 0.5, 0.9):
        kept = {(u, v) for u, v, _ in disparity_filter(g, a).graph.edges()}
        assert prev <= kept
        prev = kept
