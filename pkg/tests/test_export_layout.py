import math

import numpy as np
import pytest

from cocite.export import (export_bipartite_csv, export_csv, export_dot, export_graphml,
                           import_bipartite_csv, import_csv, import_graphml, node_size)
from cocite.graph import BipartiteGraph, Graph
from cocite.layout import spring_layout


@pytest.fixture
def weighted_triangle():
    return Graph("abc", [("a", "b", 1), ("b", "c", 2), ("a", "c", 3)])


def test_graphml_round_trip(tmp_path, weighted_triangle):
    export_graphml(weighted_triangle, tmp_path / "t.graphml", {"a": {"name": "Alpha"}})
    back = import_graphml(tmp_path / "t.graphml")
    assert back.edges() == weighted_triangle.edges()
    assert back.node_attrs("a")["name"] == "Alpha"


def test_graphml_empty(tmp_path):
    export_graphml(Graph(), tmp_path / "e.graphml")
    back = import_graphml(tmp_path / "e.graphml")
    assert back.nodes == [] and back.edges() == []


def test_csv_round_trip(tmp_path, weighted_triangle):
    export_csv(weighted_triangle, tmp_path / "t.csv")
    assert import_csv(tmp_path / "t.csv") == weighted_triangle
    assert (tmp_path / "t.csv").read_text().splitlines()[1] == "a,b,1"


def test_csv_keeps_float_weights(tmp_path):
    g = Graph("ab", [("a", "b", 0.1)])
    export_csv(g, tmp_path / "f.csv")
    assert import_csv(tmp_path / "f.csv").weight("a", "b") == 0.1


def test_bipartite_csv_round_trip(tmp_path):
    B = BipartiteGraph(edges=[("P1", "D1"), ("P2", "D1")])
    export_bipartite_csv(B, tmp_path / "b.csv")
    assert import_bipartite_csv(tmp_path / "b.csv").edges() == B.edges()


def test_dot_output(tmp_path, weighted_triangle):
    export_dot(weighted_triangle, tmp_path / "t.dot")
    text = (tmp_path / "t.dot").read_text()
    assert text.startswith('graph "G" {')
    assert text.count(" -- ") == 3


def test_node_size():
    assert node_size(0) == 0
    assert node_size(99) == pytest.approx(math.log(100))


def test_layout_deterministic(weighted_triangle):
    a = spring_layout(weighted_triangle, iterations=50, seed=4)
    b = spring_layout(weighted_triangle, iterations=50, seed=4)
    assert a.rows() == b.rows()
    c = spring_layout(weighted_triangle, iterations=50, seed=5)
    assert a.rows() != c.rows()


def test_layout_single_and_empty():
    assert spring_layout(Graph(["x"])).coordinates == {"x": (0.0, 0.0)}
    assert spring_layout(Graph()).coordinates == {}


def test_layout_bounds_and_separation():
    g = Graph("abcxyz", [("a", "b"), ("b", "c"), ("a", "c"), ("x", "y"), ("y", "z"), ("x", "z")])
    lay = spring_layout(g, iterations=300, seed=0)
    pos = lay.coordinates
    xy = np.array(list(pos.values()))
    assert np.abs(xy).max() == pytest.approx(1.0)
    assert np.allclose(xy.mean(axis=0), 0, atol=1e-12)

    def d(u, v):
        return math.dist(pos[u], pos[v])
    within = max(d(u, v) for grp in ("abc", "xyz") for u in grp for v in grp)
    between = min(d(u, v) for u in "abc" for v in "xyz")
    assert between > within


def test_layout_bad_iterations(weighted_triangle):
    with pytest.raises(ValueError):
        spring_layout(weighted_triangle, iterations=0)
