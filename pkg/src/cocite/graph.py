"""Undirected weighted graphs, two-mode graphs, and the network constructions
built on top of them (dataset co-citation and field co-citation).

Node ids are opaque hashable, orderable values (strings in the pipeline).
Iteration order is always sorted so every downstream output is deterministic.
"""
from __future__ import annotations

import math
from collections import defaultdict
from itertools import combinations
from typing import Hashable, Iterable, Mapping

from .errors import UndefinedMetricError, UnknownNodeError, ValidationError


class Graph:
    """Simple undirected graph with strictly positive edge weights."""

    def __init__(self, nodes: Iterable = (), edges: Iterable = ()):
        self._attrs: dict[Hashable, dict] = {}
        self._adj: dict[Hashable, dict[Hashable, float]] = {}
        for n in nodes:
            if isinstance(n, tuple) and len(n) == 2 and isinstance(n[1], Mapping):
                self.add_node(n[0], **n[1])
            else:
                self.add_node(n)
        for e in edges:
            if len(e) == 2:
                self.add_edge(e[0], e[1])
            else:
                self.add_edge(e[0], e[1], e[2])

    # construction
    def add_node(self, n, **attrs):
        if n not in self._adj:
            self._adj[n] = {}
            self._attrs[n] = {}
        self._attrs[n].update(attrs)

    def add_edge(self, u, v, weight: float = 1.0):
        if u == v:
            raise ValidationError(f"self-loop on {u!r}")
        if not weight > 0 or math.isinf(weight):
            raise ValidationError(f"edge ({u!r}, {v!r}) has non-positive weight {weight!r}")
        if u in self._adj and v in self._adj[u]:
            raise ValidationError(f"parallel edge ({u!r}, {v!r})")
        self.add_node(u)
        self.add_node(v)
        self._adj[u][v] = weight
        self._adj[v][u] = weight

    # queries
    def __contains__(self, n) -> bool:
        return n in self._adj

    def __len__(self) -> int:
        return len(self._adj)

    @property
    def nodes(self) -> list:
        return sorted(self._adj)

    def node_attrs(self, n) -> dict:
        self._check(n)
        return self._attrs[n]

    def number_of_nodes(self) -> int:
        return len(self._adj)

    def number_of_edges(self) -> int:
        return sum(len(nb) for nb in self._adj.values()) // 2

    def edges(self) -> list[tuple]:
        """All edges as ``(u, v, weight)`` with ``u < v``, sorted."""
        out = []
        for u in self.nodes:
            for v, w in self._adj[u].items():
                if u < v:
                    out.append((u, v, w))
        out.sort(key=lambda e: (e[0], e[1]))
        return out

    def neighbors(self, n) -> list:
        self._check(n)
        return sorted(self._adj[n])

    def adjacency(self, n) -> dict:
        self._check(n)
        return self._adj[n]

    def has_edge(self, u, v) -> bool:
        return u in self._adj and v in self._adj[u]

    def weight(self, u, v) -> float:
        self._check(u)
        try:
            return self._adj[u][v]
        except KeyError:
            raise UnknownNodeError(f"no edge ({u!r}, {v!r})") from None

    def total_weight(self) -> float:
        return math.fsum(w for _, _, w in self.edges())

    def subgraph(self, nodes) -> "Graph":
        keep = set(nodes)
        g = Graph()
        for n in sorted(keep):
            self._check(n)
            g.add_node(n, **self._attrs[n])
        for u, v, w in self.edges():
            if u in keep and v in keep:
                g.add_edge(u, v, w)
        return g

    def copy(self) -> "Graph":
        return self.subgraph(self._adj)

    def scaled(self, factor: float) -> "Graph":
        g = Graph((n, self._attrs[n]) for n in self.nodes)
        for u, v, w in self.edges():
            g.add_edge(u, v, w * factor)
        return g

    def _check(self, n):
        if n not in self._adj:
            raise UnknownNodeError(f"unknown node {n!r}")

    def __eq__(self, other):
        if not isinstance(other, Graph):
            return NotImplemented
        return (self.nodes == other.nodes and self.edges() == other.edges()
                and all(self._attrs[n] == other._attrs[n] for n in self._adj))

    def __repr__(self):
        return f"Graph(n={self.number_of_nodes()}, m={self.number_of_edges()})"


class BipartiteGraph:
    """Two-mode unweighted graph; left = publications, right = datasets or fields."""

    def __init__(self, left: Iterable = (), right: Iterable = (), edges: Iterable = ()):
        self.left: set = set(left)
        self.right: set = set(right)
        self._ladj: dict = defaultdict(set)
        self._radj: dict = defaultdict(set)
        if self.left & self.right:
            raise ValidationError("left and right node sets overlap")
        for l, r in edges:
            self.add_edge(l, r)

    def add_edge(self, l, r):
        if l in self.right or r in self.left:
            raise ValidationError(f"edge ({l!r}, {r!r}) does not join left to right")
        self.left.add(l)
        self.right.add(r)
        self._ladj[l].add(r)
        self._radj[r].add(l)

    def number_of_edges(self) -> int:
        return sum(len(s) for s in self._ladj.values())

    def edges(self) -> list[tuple]:
        return sorted((l, r) for l, rs in self._ladj.items() for r in rs)

    def right_neighbors(self, l) -> set:
        """Right nodes adjacent to left node ``l``."""
        return self._ladj.get(l, set())

    def left_neighbors(self, r) -> set:
        return self._radj.get(r, set())

    def components(self) -> list[tuple[set, set]]:
        """Connected components as ``(left_part, right_part)`` pairs."""
        seen_l, seen_r = set(), set()
        comps = []
        for start in sorted(self.left):
            if start in seen_l:
                continue
            ls, rs = {start}, set()
            stack = [("L", start)]
            seen_l.add(start)
            while stack:
                side, n = stack.pop()
                nbrs = self._ladj.get(n, ()) if side == "L" else self._radj.get(n, ())
                for m in nbrs:
                    if side == "L" and m not in seen_r:
                        seen_r.add(m)
                        rs.add(m)
                        stack.append(("R", m))
                    elif side == "R" and m not in seen_l:
                        seen_l.add(m)
                        ls.add(m)
                        stack.append(("L", m))
            comps.append((ls, rs))
        for r in sorted(self.right - seen_r):
            comps.append((set(), {r}))
        return comps

    def __repr__(self):
        return (f"BipartiteGraph(left={len(self.left)}, right={len(self.right)}, "
                f"m={self.number_of_edges()})")


# -- network constructions ----------------------------------------------------

def build_B(links, mapping: Mapping[str, str]) -> BipartiteGraph:
    """Publication -> dataset graph; studies of one series collapse into one edge."""
    B = BipartiteGraph()
    for link in links:
        B.add_edge(link.publication_id, mapping[link.study_id])
    return B


def project_cocitation(B: BipartiteGraph) -> Graph:
    """Weighted one-mode projection onto the right nodes.

    ``w(u, v)`` is the number of left nodes adjacent to both. Right nodes
    without any co-citation partner are kept as isolated nodes.
    """
    counts: dict[tuple, int] = defaultdict(int)
    for l in sorted(B.left):
        for u, v in combinations(sorted(B.right_neighbors(l)), 2):
            counts[u, v] += 1
    S = Graph(sorted(B.right))
    for (u, v), w in sorted(counts.items()):
        S.add_edge(u, v, w)
    return S


def _cited_by(links) -> dict[str, set]:
    cites = defaultdict(set)
    for link in links:
        cites[link.publication_id].add(link.study_id)
    return cites


def build_Bprime(publications, links) -> BipartiteGraph:
    """Publication -> field graph over publications that cite at least one study."""
    cites = _cited_by(links)
    Bp = BipartiteGraph()
    for p in publications:
        if p.publication_id not in cites:
            continue
        Bp.left.add(p.publication_id)
        for code in p.for_codes:
            Bp.add_edge(p.publication_id, code)
    return Bp


def project_fields(publications, links) -> Graph:
    """Field co-citation graph.

    Each publication tagged with fields f and g adds one unit of weight to
    ``(f, g)`` for every distinct study it cites.
    """
    cites = _cited_by(links)
    counts: dict[tuple, int] = defaultdict(int)
    fields = set()
    for p in publications:
        n_studies = len(cites.get(p.publication_id, ()))
        if not n_studies:
            continue
        codes = sorted(set(p.for_codes))
        fields.update(codes)
        for f, g in combinations(codes, 2):
            counts[f, g] += n_studies
    F = Graph(sorted(fields))
    for (f, g), w in sorted(counts.items()):
        F.add_edge(f, g, w)
    return F


def threshold_edges(G: Graph, min_weight: float, drop_isolated: bool = True) -> Graph:
    """Remove edges lighter than ``min_weight``; optionally drop stranded nodes."""
    if min_weight < 0:
        raise ValueError("min_weight must be >= 0")
    kept = [(u, v, w) for u, v, w in G.edges() if w >= min_weight]
    if drop_isolated:
        touched = {u for u, _, _ in kept} | {v for _, v, _ in kept}
        nodes = [n for n in G.nodes if n in touched]
    else:
        nodes = G.nodes
    H = Graph((n, G.node_attrs(n)) for n in nodes)
    for u, v, w in kept:
        H.add_edge(u, v, w)
    return H


# -- whole-graph metrics ------------------------------------------------------

def degree(G: Graph, v) -> int:
    return len(G.adjacency(v))


def strength(G: Graph, v) -> float:
    return math.fsum(G.adjacency(v).values())


def mean_degree(G: Graph) -> float:
    n = G.number_of_nodes()
    if n == 0:
        raise UndefinedMetricError("mean degree of an empty graph")
    return 2 * G.number_of_edges() / n


def connected_components(G: Graph) -> list[set]:
    """Components sorted by decreasing size, then by smallest member."""
    seen = set()
    comps = []
    for start in G.nodes:
        if start in seen:
            continue
        comp = {start}
        stack = [start]
        seen.add(start)
        while stack:
            n = stack.pop()
            for m in G.adjacency(n):
                if m not in seen:
                    seen.add(m)
                    comp.add(m)
                    stack.append(m)
        comps.append(comp)
    comps.sort(key=lambda c: (-len(c), min(c)))
    return comps


def density(G) -> float:
    """Unipartite ``2m / n(n-1)``; for a BipartiteGraph ``m / (|L| |R|)``."""
    if isinstance(G, BipartiteGraph):
        if not G.left or not G.right:
            raise UndefinedMetricError("bipartite density needs both sides non-empty")
        return G.number_of_edges() / (len(G.left) * len(G.right))
    n = G.number_of_nodes()
    if n < 2:
        raise UndefinedMetricError(f"density undefined for n={n}")
    return 2 * G.number_of_edges() / (n * (n - 1))


def triangles(G: Graph) -> int:
    count = 0
    for u, v, _ in G.edges():
        au, av = G.adjacency(u), G.adjacency(v)
        small, big = (au, av) if len(au) <= len(av) else (av, au)
        count += sum(1 for w in small if w in big)
    return count // 3


def transitivity(G: Graph) -> float:
    """``3 * triangles / connected triples``, ignoring weights."""
    triples = sum(d * (d - 1) // 2 for d in (len(G.adjacency(n)) for n in G.nodes))
    if triples == 0:
        raise UndefinedMetricError("transitivity undefined: no connected triples")
    return 3 * triangles(G) / triples


def degree_assortativity(G: Graph) -> float:
    """Pearson correlation of endpoint degrees over both orientations of each edge."""
    deg = {n: len(G.adjacency(n)) for n in G.nodes}
    xs = []
    for u, v, _ in G.edges():
        xs.append(deg[u])
        xs.append(deg[v])
    m2 = len(xs)
    if m2 == 0:
        raise UndefinedMetricError("assortativity undefined: no edges")
    # With both orientations, the x and y marginals are identical.
    mean = math.fsum(xs) / m2
    var = math.fsum((x - mean) ** 2 for x in xs) / m2
    if var <= 1e-15 * max(1.0, mean * mean):
        raise UndefinedMetricError("assortativity undefined: all edge endpoints share one degree")
    cov = math.fsum(2 * (deg[u] - mean) * (deg[v] - mean) for u, v, _ in G.edges()) / m2
    return cov / var
