"""Brute-force reference computations.

Deliberately naive and independent of the package: inputs are plain
``(nodes, edges)`` lists, and nothing here imports ``cocite``.
"""
from __future__ import annotations

import itertools
import math
from collections import deque


def adjacency(nodes, edges):
    adj = {n: set() for n in nodes}
    for e in edges:
        u, v = e[0], e[1]
        adj[u].add(v)
        adj[v].add(u)
    return adj


def bfs_counts(adj, s):
    """Hop distances and shortest-path counts from ``s``."""
    dist = {s: 0}
    sigma = {s: 1}
    q = deque([s])
    while q:
        v = q.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                sigma[w] = 0
                q.append(w)
            if dist[w] == dist[v] + 1:
                sigma[w] += sigma[v]
    return dist, sigma


def betweenness(nodes, edges, normalized=True):
    """sigma_st(v) = sigma_sv * sigma_vt whenever v lies on a shortest s-t path."""
    adj = adjacency(nodes, edges)
    info = {s: bfs_counts(adj, s) for s in nodes}
    bc = {v: 0.0 for v in nodes}
    for s, t in itertools.combinations(nodes, 2):
        ds, ss = info[s]
        if t not in ds:
            continue
        for v in nodes:
            if v in (s, t) or v not in ds:
                continue
            dt, st = info[t]
            if v in dt and ds[v] + dt[v] == ds[t]:
                bc[v] += ss[v] * st[v] / ss[t]
    n = len(nodes)
    if normalized:
        bc = {v: x / ((n - 1) * (n - 2) / 2) for v, x in bc.items()}
    return bc


def is_clique(adj, nodes):
    return all(b in adj[a] for a, b in itertools.combinations(nodes, 2))


def maximal_cliques(nodes, edges):
    adj = adjacency(nodes, edges)
    cliques = [frozenset(c) for r in range(1, len(nodes) + 1)
               for c in itertools.combinations(nodes, r) if is_clique(adj, c)]
    maximal = [c for c in cliques if not any(c < d for d in cliques)]
    return sorted(sorted(c) for c in maximal)


def k_clique_communities(nodes, edges, k):
    """Enumerate every k-clique, link pairs sharing k-1 nodes, union components."""
    adj = adjacency(nodes, edges)
    kc = [frozenset(c) for c in itertools.combinations(sorted(nodes), k) if is_clique(adj, c)]
    parent = list(range(len(kc)))

    def find(a):
        while parent[a] != a:
            a = parent[a]
        return a

    for i, j in itertools.combinations(range(len(kc)), 2):
        if len(kc[i] & kc[j]) == k - 1:
            parent[find(i)] = find(j)
    groups = {}
    for i, c in enumerate(kc):
        groups.setdefault(find(i), set()).update(c)
    return {frozenset(g) for g in groups.values()}


def jenks(values, k):
    """Exhaustive minimum over cut positions between distinct sorted values.

    Returns the class index per input value; the lexicographically first
    cut tuple wins ties (relative slack 1e-9).
    """
    distinct = sorted(set(values))
    d = len(distinct)

    def cost(cuts):
        bounds = [0, *cuts, d]
        total = 0.0
        for a, b in zip(bounds, bounds[1:]):
            seg = [v for v in values if distinct[a] <= v <= distinct[b - 1]]
            mu = sum(seg) / len(seg)
            total += sum((x - mu) ** 2 for x in seg)
        return total

    options = [(cuts, cost(cuts)) for cuts in itertools.combinations(range(1, d), k - 1)]
    mu = sum(values) / len(values)
    scale = max(sum((x - mu) ** 2 for x in values), 1e-300)
    best = min(c for _, c in options)
    cuts = next(cu for cu, c in options if c <= best + 1e-9 * scale)
    uppers = [distinct[c - 1] for c in cuts]
    return [sum(1 for u in uppers if v > u) for v in values]


def modularity(nodes, edges, assignment, resolution=1.0):
    """Pairwise form: (1/2W) sum_ij [A_ij - gamma k_i k_j / 2W] delta(c_i, c_j)."""
    A = {(u, v): 0.0 for u in nodes for v in nodes}
    for u, v, w in edges:
        A[u, v] += w
        A[v, u] += w
    k = {u: sum(A[u, v] for v in nodes) for u in nodes}
    two_w = sum(k.values())
    q = 0.0
    for u in nodes:
        for v in nodes:
            if assignment[u] == assignment[v]:
                q += A[u, v] - resolution * k[u] * k[v] / two_w
    return q / two_w


def set_partitions(items):
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]
        yield [[first]] + part


def best_partition(nodes, edges):
    """Exhaustive modularity maximum over every set partition (n <= 9)."""
    best, best_q = None, -math.inf
    for part in set_partitions(list(nodes)):
        assign = {n: i for i, grp in enumerate(part) for n in grp}
        q = modularity(nodes, edges, assign)
        if q > best_q + 1e-12:
            best, best_q = part, q
    return sorted(sorted(g) for g in best), best_q


def density(nodes, edges):
    n = len(nodes)
    possible = sum(1 for _ in itertools.combinations(nodes, 2))
    return len(edges) / possible if n >= 2 else None


def transitivity(nodes, edges):
    adj = adjacency(nodes, edges)
    closed = triples = 0
    for v in nodes:
        for a, b in itertools.combinations(sorted(adj[v]), 2):
            triples += 1
            if b in adj[a]:
                closed += 1
    return closed / triples if triples else None


def assortativity(nodes, edges):
    adj = adjacency(nodes, edges)
    xs, ys = [], []
    for e in edges:
        u, v = e[0], e[1]
        xs += [len(adj[u]), len(adj[v])]
        ys += [len(adj[v]), len(adj[u])]
    n = len(xs)
    if n == 0:
        return None
    mx, my = sum(xs) / n, sum(ys) / n
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    sxx = sum((x - mx) ** 2 for x in xs)
    syy = sum((y - my) ** 2 for y in ys)
    if sxx == 0 or syy == 0:
        return None
    return sxy / math.sqrt(sxx * syy)


def projection(pairs):
    """Co-citation weights by double loop over right nodes."""
    right = sorted({r for _, r in pairs})
    nbrs = {r: {l for l, rr in pairs if rr == r} for r in right}
    out = {}
    for i, u in enumerate(right):
        for v in right[i + 1:]:
            c = len(nbrs[u] & nbrs[v])
            if c:
                out[u, v] = c
    return out


def components(nodes, edges):
    adj = adjacency(nodes, edges)
    seen, comps = set(), []
    for s in nodes:
        if s in seen:
            continue
        comp, stack = set(), [s]
        while stack:
            v = stack.pop()
            if v in comp:
                continue
            comp.add(v)
            stack.extend(adj[v] - comp)
        seen |= comp
        comps.append(frozenset(comp))
    return set(comps)
