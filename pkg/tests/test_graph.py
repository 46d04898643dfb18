from __future__ import annotations

import io
import json

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from mwcycle.graph import (
    CycleRecord,
    GraphFormatError,
    GraphValidationError,
    WeightedGraph,
    canonical_order,
    canonicalize_cycle,
    dumps_graph,
    load_graph,
    read_graph,
    save_graph,
)


def test_triangle_from_edge_list():
    g = load_graph("0 1 1.0\n1 2 1.0\n2 0 1.0")
    assert (g.vertex_count, g.edge_count) == (3, 3)
    assert g.weights == (1.0, 1.0, 1.0)


def test_self_loop_is_rejected_with_line_context():
    with pytest.raises(GraphValidationError, match="line 2"):
        load_graph("0 1 1.0\n3 3 2.0\n")


def test_duplicate_pair_is_rejected():
    with pytest.raises(GraphValidationError, match="duplicate"):
        load_graph("0 1 1.0\n1 0 2.0\n")


@pytest.mark.parametrize("text", ["0 1 0\n", "0 1 -2\n", "0 1 inf\n", "0 1 nan\n"])
def test_nonpositive_or_nonfinite_weights_are_rejected(text):
    with pytest.raises(GraphValidationError):
        load_graph(text)


@pytest.mark.parametrize("text", ["0 1 x\n", "0 1 1 extra\n"])
def test_malformed_lines_are_format_errors(text):
    with pytest.raises(GraphFormatError, match="line 1"):
        load_graph(text)


def test_comments_labels_and_isolated_vertices():
    g = load_graph("# header\nb a 2  # trailing\nlonely\na c\n")
    assert g.labels == ("b", "a", "lonely", "c")
    assert g.weight(0, 1) == 2.0
    assert g.weight(1, 3) == 1.0
    assert g.degree(2) == 0


def test_json_format_and_label_coercion():
    doc = {"nodes": [10, 20, 30], "edges": [[10, 20, 1.5], [20, 30, 2]]}
    g = load_graph(json.dumps(doc), format="json")
    assert g.labels == ("10", "20", "30")
    assert g.weight(1, 2) == 2.0


def test_json_errors_are_format_errors():
    with pytest.raises(GraphFormatError):
        load_graph("{not json", format="json")
    with pytest.raises(GraphFormatError):
        load_graph(json.dumps({"edges": [[0]]}), format="json")


def test_load_accepts_bytes_and_streams():
    assert load_graph(b"0 1 1\n1 2 1\n").edge_count == 2
    assert load_graph(io.BytesIO(b"0 1 1\n")).edge_count == 1


def test_constructor_validation():
    with pytest.raises(GraphValidationError):
        WeightedGraph(2, [(0, 2, 1.0)])
    with pytest.raises(GraphValidationError):
        WeightedGraph(2, [(0, 1, 1.0)], labels=["a", "a"])
    g = WeightedGraph(3, [(2, 0, 4.0)])
    assert g.edges == ((0, 2, 4.0),)
    assert g.edge_id(2, 0) == 0 and not g.has_edge(0, 1)


def test_adjacency_lists_each_edge_once_per_endpoint():
    g = WeightedGraph(4, [(0, 1, 1.0), (1, 2, 2.0), (0, 3, 3.0)])
    seen = sorted((min(a, b), max(a, b), eid) for a in range(4) for b, eid, _ in g.adjacency[a])
    assert seen == sorted([(0, 1, 0), (0, 1, 0), (1, 2, 1), (1, 2, 1), (0, 3, 2), (0, 3, 2)])


def test_is_forest(triangle, path10):
    assert not triangle.is_forest()
    assert path10.is_forest()
    assert WeightedGraph(0, []).is_forest()


# -------------------------------------------------------------- cycles


def test_canonicalize_rotation_and_orientation(triangle):
    assert canonicalize_cycle((2, 0, 1), triangle).vertices == (0, 1, 2)
    assert canonicalize_cycle((0, 2, 1), triangle).vertices == (0, 1, 2)
    assert canonicalize_cycle((2, 0, 1), triangle).length == 3.0


def test_square_length_is_the_weight_sum():
    g = WeightedGraph(4, [(0, 1, 1.0), (1, 2, 2.0), (2, 3, 3.0), (0, 3, 4.0)])
    rec = canonicalize_cycle((0, 1, 2, 3), g)
    assert rec.length == 10.0
    assert rec.edge_ids == (0, 1, 2, 3)


def test_canonicalize_rejects_bad_cycles(triangle, path10):
    with pytest.raises(GraphValidationError):
        canonicalize_cycle((0, 1), triangle)
    with pytest.raises(GraphValidationError):
        canonicalize_cycle((0, 1, 0), triangle)
    with pytest.raises(GraphValidationError):
        canonicalize_cycle((0, 1, 2), path10)


def test_composite_is_distance_plus_length(triangle):
    rec = canonicalize_cycle((1, 2, 0), triangle, root=5, dist_to_cycle=2.0)
    assert rec.composite == 5.0 and rec.root == 5


def test_records_compare_by_vertices_only():
    assert CycleRecord((0, 1, 2), 3.0) == CycleRecord((0, 1, 2), 7.0, root=1)
    assert len(CycleRecord((0, 1, 2, 3), 1.0)) == 4


@given(st.lists(st.integers(0, 50), min_size=3, max_size=12, unique=True), st.integers(0, 11), st.booleans())
def test_canonical_order_ignores_rotation_and_reflection(cycle, shift, flip):
    shift %= len(cycle)
    other = cycle[shift:] + cycle[:shift]
    if flip:
        other = other[::-1]
    assert canonical_order(other) == canonical_order(cycle)
    canon = canonical_order(cycle)
    assert canon[0] == min(cycle) and canon[1] < canon[-1]


# -------------------------------------------------------------- round trips


@st.composite
def graphs(draw, labelled=False):
    n = draw(st.integers(0, 9))
    pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
    chosen = draw(st.lists(st.sampled_from(pairs), unique=True) if pairs else st.just([]))
    chosen = draw(st.permutations(chosen))
    weights = st.one_of(st.integers(1, 1000).map(float), st.floats(1e-6, 1e6, allow_nan=False))
    edges = [(u, v, draw(weights)) if draw(st.booleans()) else (v, u, draw(weights)) for u, v in chosen]
    labels = None
    if labelled:
        labels = draw(st.lists(st.from_regex(r"[a-z][a-z0-9_]{0,5}", fullmatch=True), min_size=n, max_size=n, unique=True))
    return WeightedGraph(n, edges, labels)


@given(graphs(labelled=True))
@settings(max_examples=150)
def test_edge_list_round_trip(g):
    assert load_graph(dumps_graph(g)) == g


@given(graphs(labelled=True))
@settings(max_examples=150)
def test_json_round_trip(g):
    assert load_graph(dumps_graph(g, "json"), format="json") == g


def test_file_round_trip_picks_format_from_extension(tmp_path, k4):
    for name in ("g.txt", "g.json"):
        save_graph(k4, tmp_path / name)
        assert read_graph(tmp_path / name) == k4
    assert (tmp_path / "g.json").read_text().startswith("{")


def test_labels_with_whitespace_cannot_be_written_as_edge_lists():
    g = WeightedGraph(2, [(0, 1, 1.0)], labels=["a b", "c"])
    with pytest.raises(GraphFormatError):
        dumps_graph(g)
    assert load_graph(dumps_graph(g, "json"), format="json") == g


def test_with_weights_keeps_topology(k4):
    h = k4.with_weights([2.0] * 6)
    assert [e[:2] for e in h.edges] == [e[:2] for e in k4.edges]
    assert set(h.weights) == {2.0}
    with pytest.raises(GraphValidationError):
        k4.with_weights([1.0])
