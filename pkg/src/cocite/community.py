"""Overlapping communities by k-clique percolation and disjoint communities by
Louvain modularity optimization."""
from __future__ import annotations

import math
import random
from collections import defaultdict
from dataclasses import dataclass, field

from .errors import ParameterError, UndefinedMetricError
from .graph import Graph

LOUVAIN_TOL = 1e-10


@dataclass
class OverlappingCover:
    communities: list[frozenset]
    membership: dict
    uncovered: set
    k: int = 3

    @classmethod
    def from_communities(cls, communities, nodes, k=3) -> "OverlappingCover":
        comms = sorted((frozenset(c) for c in communities), key=lambda c: (-len(c), sorted(c)))
        membership = defaultdict(set)
        for idx, c in enumerate(comms):
            for n in c:
                membership[n].add(idx)
        covered = set(membership)
        return cls(comms, dict(membership), set(nodes) - covered, k)

    def rows(self):
        """``(node, community_index)`` pairs, one per membership."""
        return sorted((n, i) for n, idxs in self.membership.items() for i in idxs)


@dataclass
class Partition:
    assignment: dict
    modularity: float
    levels: list[float] = field(default_factory=list)
    seed: int | None = None

    @property
    def n_communities(self) -> int:
        return len(set(self.assignment.values()))

    def communities(self) -> list[set]:
        groups = defaultdict(set)
        for n, c in self.assignment.items():
            groups[c].add(n)
        return [groups[c] for c in sorted(groups)]

    def rows(self):
        return sorted(self.assignment.items())


# -- cliques -------------------------------------------------------------------

def maximal_cliques(G: Graph) -> list[list]:
    """All maximal cliques (Bron-Kerbosch with Tomita pivoting), each sorted,
    listed in lexicographic order. Isolated nodes form singleton cliques."""
    adj = {v: set(G.adjacency(v)) for v in G.nodes}
    out = []
    # Iterative to stay clear of the recursion limit on dense graphs.
    stack = [(set(), set(adj), set())]
    while stack:
        R, P, X = stack.pop()
        if not P:
            if not X:
                out.append(sorted(R))
            continue
        pivot = max(P | X, key=lambda u: (len(P & adj[u]), str(u)))
        for v in sorted(P - adj[pivot], reverse=True):
            stack.append((R | {v}, P & adj[v], X & adj[v]))
            P = P - {v}
            X = X | {v}
    out.sort()
    return out


class _UnionFind:
    def __init__(self, n):
        self.parent = list(range(n))

    def find(self, a):
        while self.parent[a] != a:
            self.parent[a] = self.parent[self.parent[a]]
            a = self.parent[a]
        return a

    def union(self, a, b):
        ra, rb = self.find(a), self.find(b)
        if ra != rb:
            self.parent[max(ra, rb)] = min(ra, rb)


def k_clique_communities(G: Graph, k: int = 3) -> OverlappingCover:
    """Clique percolation.

    Two maximal cliques of size >= k belong to the same community when they
    share at least k-1 nodes; this is equivalent to chaining k-cliques that
    share k-1 nodes, without enumerating every k-clique.
    """
    if k < 2:
        raise ParameterError(f"k must be >= 2, got {k}")
    cliques = [frozenset(c) for c in maximal_cliques(G) if len(c) >= k]
    uf = _UnionFind(len(cliques))
    by_node = defaultdict(list)
    for idx, c in enumerate(cliques):
        for n in c:
            by_node[n].append(idx)
    for idx, c in enumerate(cliques):
        checked = set()
        for n in c:
            for other in by_node[n]:
                if other <= idx or other in checked:
                    continue
                checked.add(other)
                if len(c & cliques[other]) >= k - 1:
                    uf.union(idx, other)
    groups = defaultdict(set)
    for idx, c in enumerate(cliques):
        groups[uf.find(idx)].update(c)
    return OverlappingCover.from_communities(groups.values(), G.nodes, k)


# -- modularity ------------------------------------------------------------------

def modularity(G: Graph, assignment, resolution: float = 1.0) -> float:
    """Weighted Newman-Girvan modularity of a disjoint, total assignment."""
    W = G.total_weight()
    if W <= 0:
        raise UndefinedMetricError("modularity undefined on an edgeless graph")
    missing = [n for n in G.nodes if n not in assignment]
    if missing:
        raise ParameterError(f"assignment misses nodes {missing[:5]}")
    internal = defaultdict(float)
    tot = defaultdict(float)
    for u, v, w in G.edges():
        cu = assignment[u]
        tot[cu] += w
        tot[assignment[v]] += w
        if cu == assignment[v]:
            internal[cu] += w
    return math.fsum(internal[c] / W - resolution * (tot[c] / (2 * W)) ** 2 for c in tot)


# -- Louvain -------------------------------------------------------------------

def _level_modularity(adj, loops, comm, m2, resolution):
    internal = defaultdict(float)
    tot = defaultdict(float)
    for u, nbrs in adj.items():
        cu = comm[u]
        k = 2 * loops[u] + sum(nbrs.values())
        tot[cu] += k
        internal[cu] += 2 * loops[u]
        for v, w in nbrs.items():
            if comm[v] == cu:
                internal[cu] += w
    return math.fsum(internal[c] / m2 - resolution * (tot[c] / m2) ** 2 for c in tot)


def _one_level(adj, loops, rng, m2, resolution):
    """Local-move phase on an aggregated graph. Returns (community map, moved?)."""
    nodes = sorted(adj)
    comm = {u: u for u in nodes}
    kdeg = {u: 2 * loops[u] + sum(adj[u].values()) for u in nodes}
    tot = dict(kdeg)
    order = nodes[:]
    rng.shuffle(order)
    improved = False
    while True:
        moves = 0
        for u in order:
            cu = comm[u]
            ku = kdeg[u]
            links = defaultdict(float)
            for v, w in adj[u].items():
                links[comm[v]] += w
            tot[cu] -= ku
            base = links.get(cu, 0.0) - resolution * tot[cu] * ku / m2
            best_c, best_gain = cu, base
            for c in sorted(links):
                if c == cu:
                    continue
                gain = links[c] - resolution * tot[c] * ku / m2
                if gain > best_gain + LOUVAIN_TOL:
                    best_c, best_gain = c, gain
            tot[best_c] += ku
            if best_c != cu:
                comm[u] = best_c
                moves += 1
        if not moves:
            break
        improved = True
    return comm, improved


def louvain(G: Graph, seed: int = 0, resolution: float = 1.0) -> Partition:
    """Two-phase Louvain (local moves, then aggregation) until no gain.

    Node visit order at each level is a shuffle seeded by ``seed``. The
    returned Partition records modularity after every level in ``levels``.
    """
    if resolution <= 0:
        raise ParameterError("resolution must be > 0")
    if G.number_of_edges() == 0:
        raise UndefinedMetricError("Louvain needs at least one edge")
    rng = random.Random(seed)
    adj = {u: {v: float(w) for v, w in G.adjacency(u).items()} for u in G.nodes}
    loops = {u: 0.0 for u in adj}
    m2 = 2 * G.total_weight()
    members = {u: {u} for u in adj}
    levels = [_level_modularity(adj, loops, {u: u for u in adj}, m2, resolution)]

    while True:
        comm, improved = _one_level(adj, loops, rng, m2, resolution)
        if not improved:
            break
        labels = {c: i for i, c in enumerate(sorted(set(comm.values())))}
        new_members = defaultdict(set)
        for u, c in comm.items():
            new_members[labels[c]] |= members[u]
        new_adj = {labels[c]: defaultdict(float) for c in comm.values()}
        new_loops = defaultdict(float)
        for u in adj:
            cu = labels[comm[u]]
            new_loops[cu] += loops[u]
            for v, w in adj[u].items():
                cv = labels[comm[v]]
                if cu == cv:
                    new_loops[cu] += w / 2
                else:
                    new_adj[cu][cv] += w
        adj = {c: dict(nb) for c, nb in new_adj.items()}
        loops = {c: new_loops[c] for c in adj}
        members = dict(new_members)
        levels.append(_level_modularity(adj, loops, {c: c for c in adj}, m2, resolution))

    # Contiguous ids ordered by each community's smallest member.
    groups = sorted(members.values(), key=min)
    assignment = {n: i for i, grp in enumerate(groups) for n in grp}
    q = modularity(G, assignment, resolution)
    return Partition(assignment, q, levels, seed)


def louvain_best_of(G: Graph, seeds, resolution: float = 1.0) -> Partition:
    """Highest-modularity run over ``seeds``; earliest seed wins ties."""
    best = None
    for s in seeds:
        p = louvain(G, s, resolution)
        if best is None or p.modularity > best.modularity + LOUVAIN_TOL:
            best = p
    if best is None:
        raise ParameterError("no seeds given")
    return best
