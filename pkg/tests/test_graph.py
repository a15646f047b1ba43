import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mvbackbone.graph import (
    ParseError,
    WeightedGraph,
    export,
    largest_connected_component,
    load_edge_list,
    parse_edge_list,
    remove_node,
    strength,
)

from conftest import random_weighted_graph


@st.composite
def graphs(draw, max_nodes=12):
    n = draw(st.integers(2, max_nodes))
    labels = [f"v{i}" for i in range(n)]
    pairs = [(i, j) for i in range(n) for j in range(i + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), min_size=1, max_size=len(pairs), unique=True))
    weights = draw(st.lists(st.floats(0.01, 100.0), min_size=len(chosen), max_size=len(chosen)))
    return WeightedGraph(labels, [(labels[i], labels[j], w) for (i, j), w in zip(chosen, weights)])


def test_parse_simple():
    g = parse_edge_list(["a b 2", "b c 3"])
    assert (g.n_nodes, g.n_edges, g.total_weight) == (3, 2, 5.0)
    assert g.nodes == ["a", "b", "c"]


def test_duplicates_merge_by_sum():
    g = parse_edge_list(["a b 2", "a b 2"])
    assert g.n_edges == 1 and g.weight("a", "b") == 4.0
    g = parse_edge_list(["a b 2", "b a 1.5"])
    assert g.weight("b", "a") == 3.5


def test_comma_separator_and_default_weight():
    g = parse_edge_list(["# comment", "", "a,b,2.5", "b c"])
    assert g.weight("a", "b") == 2.5
    assert g.weight("b", "c") == 1.0


def test_self_loops_dropped(caplog):
    g = parse_edge_list(["a a 3", "a b 1"])
    assert g.n_edges == 1 and g.total_weight == 1.0
    assert "self-loop" in caplog.text


@pytest.mark.parametrize(
    "lines, lineno",
    [(["a b 1", "a"], 2), (["a b x"], 1), (["a b 1 2"], 1), (["a b 0"], 1), (["# c", "a b -1"], 2), (["a b nan"], 1)],
)
def test_parse_errors_carry_line_number(lines, lineno):
    with pytest.raises(ParseError) as exc:
        parse_edge_list(lines)
    assert exc.value.lineno == lineno


def test_karate_counts(karate):
    # 34 nodes / 78 edges; some summaries quote 33 / 77 for the same club
    assert (karate.n_nodes, karate.n_edges) == (34, 78)
    assert karate.total_weight == 231.0
    assert np.mean(karate.strengths()) == pytest.approx(13.59, abs=0.005)


def test_strength():
    tri = WeightedGraph(edges=[("a", "b", 1), ("b", "c", 1), ("a", "c", 1)])
    assert all(strength(tri, v) == 2.0 for v in "abc")
    star = WeightedGraph(edges=[("c", f"l{w}", w) for w in (1, 2, 3, 4)])
    assert strength(star, "c") == 10.0
    g = WeightedGraph(nodes=["lonely"], edges=[("a", "b", 1)])
    assert g.strength("lonely") == 0.0
    with pytest.raises(KeyError):
        g.strength("missing")


def test_remove_node():
    path = WeightedGraph(edges=[("a", "b", 1), ("b", "c", 1)])
    h = remove_node(path, "b")
    assert h.nodes == ["a", "c"] and h.n_edges == 0
    tri = WeightedGraph(edges=[("a", "b", 1), ("b", "c", 1), ("a", "c", 1)])
    assert tri.remove_node("a").n_edges == 1
    with pytest.raises(KeyError):
        tri.remove_node("zz")


def test_lcc():
    g = WeightedGraph(
        nodes=["iso"],
        edges=[("a", "b", 1), ("b", "c", 1), ("a", "c", 1), ("x", "y", 1), ("y", "z", 1), ("x", "z", 1)],
    )
    # equal sizes: the component holding the smallest index wins
    assert largest_connected_component(g).nodes == ["a", "b", "c"]
    conn = WeightedGraph(edges=[("a", "b", 1), ("b", "c", 1)])
    assert largest_connected_component(conn) is conn
    sizes = WeightedGraph(edges=[("p", "q", 1), ("q", "r", 1)] + [(f"k{i}", f"k{i+1}", 1) for i in range(4)])
    assert largest_connected_component(sizes).n_nodes == 5
    assert WeightedGraph().largest_connected_component().n_nodes == 0


def test_induced_subgraph():
    sq = WeightedGraph(edges=[("a", "b", 1), ("b", "c", 2), ("c", "d", 3), ("d", "a", 4)])
    assert sq.induced_subgraph(sq.nodes) == sq
    assert sq.induced_subgraph([]).n_nodes == 0
    h = sq.induced_subgraph({"a", "b", "c"})
    assert sorted(h.edges()) == [("a", "b", 1.0), ("b", "c", 2.0)]
    with pytest.raises(KeyError):
        sq.induced_subgraph(["a", "nope"])


def test_edgelist_round_trip(tmp_path, lesmis):
    out = tmp_path / "g.edges"
    export(lesmis, "edgelist", out)
    back = load_edge_list(out)
    assert back == lesmis
    assert back.total_weight == pytest.approx(lesmis.total_weight, abs=1e-9)


def test_empty_export(tmp_path):
    out = tmp_path / "e.edges"
    export(WeightedGraph(), "edgelist", out)
    text = out.read_text()
    assert text.startswith("#") and len(text.strip().splitlines()) == 1
    assert load_edge_list(out).n_nodes == 0


def test_dot_export(tmp_path):
    tri = WeightedGraph(edges=[("a", "b", 1), ("b", "c", 2), ("a", "c", 3)])
    out = tmp_path / "t.dot"
    export(tri, "dot", out, communities={"a": 0, "b": 0, "c": 1})
    text = out.read_text()
    assert text.startswith("graph G {")
    assert sum(1 for line in text.splitlines() if "[width=" in line) == 3
    assert text.count(" -- ") == 3
    assert "fillcolor=2" in text


def test_export_rejects_unwritable_labels(tmp_path):
    g = WeightedGraph(edges=[("has space", "b", 1)])
    with pytest.raises(ValueError):
        export(g, "edgelist", tmp_path / "x.edges")


@settings(max_examples=60, deadline=None)
@given(graphs())
def test_handshake_identity(g):
    assert math.isclose(g.strengths().sum(), 2 * g.total_weight, rel_tol=1e-12)


@settings(max_examples=60, deadline=None)
@given(graphs(), st.data())
def test_remove_conserves_weight_and_lcc_shrinks(g, data):
    v = data.draw(st.sampled_from(g.nodes))
    h = g.remove_node(v)
    assert h.total_weight == pytest.approx(g.total_weight - g.strength(v), abs=1e-9)
    assert h.largest_connected_component().n_nodes <= g.n_nodes


@settings(max_examples=40, deadline=None)
@given(graphs())
def test_round_trip_property(tmp_path_factory, g):
    g = g.induced_subgraph([v for v in g.nodes if g.degree(v) > 0])
    out = tmp_path_factory.mktemp("rt") / "g.edges"
    export(g, "edgelist", out)
    back = load_edge_list(out)
    assert (back.n_nodes, back.n_edges) == (g.n_nodes, g.n_edges)
    assert back.total_weight == pytest.approx(g.total_weight, abs=1e-9)


def test_cached_total_weight_after_mutations():
    rng = np.random.default_rng(3)
    g = random_weighted_graph(rng, 20, 0.4)
    for _ in range(8):
        g = g.remove_node(g.nodes[int(rng.integers(g.n_nodes))]).largest_connected_component()
        recomputed = sum(w for _, _, w in g.edges())
        assert abs(recomputed - g.total_weight) < 1e-9
