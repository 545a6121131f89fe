import itertools
import random

import pytest
from hypothesis import given, settings, strategies as st

import oracles
from conftest import small_graphs
from cocite.corpus import CitationLink, PublicationRecord
from cocite.errors import UndefinedMetricError, UnknownNodeError, ValidationError
from cocite.graph import (BipartiteGraph, Graph, build_B, build_Bprime, connected_components,
                          degree, degree_assortativity, density, mean_degree, project_cocitation,
                          project_fields, strength, threshold_edges, transitivity)


def test_graph_rejects_self_loops_parallel_and_bad_weights():
    g = Graph(edges=[("a", "b", 1.0)])
    with pytest.raises(ValidationError):
        g.add_edge("a", "a")
    with pytest.raises(ValidationError):
        g.add_edge("b", "a", 2.0)
    with pytest.raises(ValidationError):
        g.add_edge("a", "c", 0)


def test_bipartite_sides_disjoint():
    with pytest.raises(ValidationError):
        BipartiteGraph(left=["x"], right=["x"])
    b = BipartiteGraph(edges=[("p", "d")])
    with pytest.raises(ValidationError):
        b.add_edge("d", "q")


def test_build_B_collapses_series():
    links = [CitationLink("P1", "S1"), CitationLink("P1", "S2")]
    B = build_B(links, {"S1": "A", "S2": "A"})
    assert B.edges() == [("P1", "A")]
    assert build_B([], {}).number_of_edges() == 0


def test_cocitation_projection_example():
    B = BipartiteGraph(edges=[("P1", "D1"), ("P1", "D2"), ("P2", "D1"), ("P2", "D2"),
                              ("P3", "D2"), ("P3", "D3"), ("P4", "D4")])
    S = project_cocitation(B)
    assert S.edges() == [("D1", "D2", 2), ("D2", "D3", 1)]
    assert "D4" in S and degree(S, "D4") == 0


@settings(max_examples=60)
@given(st.lists(st.tuples(st.integers(0, 199), st.integers(0, 14)), max_size=300))
def test_projection_matches_double_loop(pairs):
    pairs = [(f"P{l}", f"D{r}") for l, r in set(pairs)]
    S = project_cocitation(BipartiteGraph(edges=pairs))
    assert {(u, v): w for u, v, w in S.edges()} == oracles.projection(pairs)


def test_field_projection_examples():
    pubs = [PublicationRecord("P1", 2000, for_codes=("Fa", "Fb")), PublicationRecord("P2", 2000, for_codes=("Fa",))]
    links = [CitationLink("P1", "S1"), CitationLink("P1", "S2"), CitationLink("P2", "S1")]
    F = project_fields(pubs, links)
    assert F.edges() == [("Fa", "Fb", 2)]
    Bp = build_Bprime(pubs + [PublicationRecord("P3", 2000)], links + [CitationLink("P3", "S9")])
    assert Bp.edges() == [("P1", "Fa"), ("P1", "Fb"), ("P2", "Fa")]
    assert "P3" in Bp.left and not Bp.right_neighbors("P3")


def test_field_projection_sums_study_counts():
    pubs = [PublicationRecord("P1", 2000, for_codes=("Fa", "Fb")),
            PublicationRecord("P2", 2000, for_codes=("Fa", "Fb"))]
    links = [CitationLink("P1", "S1")] + [CitationLink("P2", f"S{i}") for i in range(3)]
    # brute force: one unit per (publication, study) pair for publications carrying both fields
    expected = sum(1 for l in links for p in pubs if p.publication_id == l.publication_id
                   and {"Fa", "Fb"} <= set(p.for_codes))
    assert expected == 4
    assert project_fields(pubs, links).weight("Fa", "Fb") == 4


def test_threshold_examples():
    g = Graph(edges=[("a", "b", 1), ("b", "c", 5)])
    h = threshold_edges(g, 2, drop_isolated=True)
    assert h.nodes == ["b", "c"] and h.edges() == [("b", "c", 5)]
    assert threshold_edges(g, 0) == g
    assert threshold_edges(g, 2, drop_isolated=False).nodes == ["a", "b", "c"]


@given(small_graphs(max_nodes=10), st.integers(0, 6), st.integers(0, 6))
def test_threshold_monotone_idempotent(graph, t1, t2):
    nodes, edges = graph
    rng = random.Random(len(edges))
    g = Graph(nodes, [(u, v, rng.randint(1, 6)) for u, v in edges])
    lo, hi = sorted((t1, t2))
    a, b = threshold_edges(g, lo), threshold_edges(g, hi)
    assert set(b.edges()) <= set(a.edges())
    assert threshold_edges(a, lo) == a


def test_components_ordering_and_singletons():
    assert connected_components(Graph("xyz")) == [{"x"}, {"y"}, {"z"}]
    g = Graph("abcdef", [("e", "f"), ("a", "b"), ("b", "c")])
    assert connected_components(g) == [{"a", "b", "c"}, {"e", "f"}, {"d"}]


@given(small_graphs(max_nodes=15))
def test_components_partition(graph):
    nodes, edges = graph
    comps = connected_components(Graph(nodes, edges))
    assert {frozenset(c) for c in comps} == oracles.components(nodes, edges)
    assert sum(len(c) for c in comps) == len(nodes)
    where = {n: i for i, c in enumerate(comps) for n in c}
    assert all(where[u] == where[v] for u, v in edges)


def test_density_examples(triangle, path3):
    assert density(triangle) == 1.0
    assert density(path3) == pytest.approx(2 / 3)
    with pytest.raises(UndefinedMetricError):
        density(Graph(["a"]))
    assert density(BipartiteGraph(edges=[("p", "d"), ("q", "d")])) == 1.0


def test_transitivity_examples(triangle, path3, bowtie):
    assert transitivity(triangle) == 1.0
    assert transitivity(path3) == 0.0
    assert transitivity(bowtie) == pytest.approx(0.6)
    with pytest.raises(UndefinedMetricError):
        transitivity(Graph("ab", [("a", "b")]))


def test_assortativity_examples():
    star = Graph("hwxyz", [("h", x) for x in "wxyz"])
    assert degree_assortativity(star) == pytest.approx(-1.0, abs=1e-12)
    k4 = Graph(range(4), itertools.combinations(range(4), 2))
    with pytest.raises(UndefinedMetricError):
        degree_assortativity(k4)


def test_degree_strength(path3):
    assert degree(path3, "b") == 2
    assert strength(Graph(edges=[("a", "b", 2.5)]), "a") == 2.5
    with pytest.raises(UnknownNodeError):
        degree(path3, "zz")
    assert mean_degree(path3) == pytest.approx(4 / 3)


@given(small_graphs(max_nodes=14))
def test_handshake(graph):
    nodes, edges = graph
    g = Graph(nodes, edges)
    assert sum(degree(g, v) for v in g.nodes) == 2 * g.number_of_edges()


@given(small_graphs(max_nodes=12, min_nodes=3), st.floats(0.01, 100))
def test_density_transitivity_ignore_weight_scale(graph, factor):
    nodes, edges = graph
    g = Graph(nodes, edges)
    h = g.scaled(factor)
    assert density(h) == density(g)
    try:
        t = transitivity(g)
    except UndefinedMetricError:
        return
    assert transitivity(h) == t
