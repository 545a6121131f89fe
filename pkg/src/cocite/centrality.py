"""Node centralities and natural-breaks classification.

Betweenness is accumulated from single-source BFS passes (Brandes), using
hop counts even on weighted graphs. Natural breaks are the exact
Fisher-Jenks optimum found by dynamic programming.
"""
from __future__ import annotations

import math
import os
from bisect import bisect_left
from collections import deque
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from typing import Mapping, Sequence

from .errors import InfeasibleError, UndefinedMetricError
from .graph import Graph

# Relative slack when comparing within-class squared deviations.
TIE_RTOL = 1e-9


@dataclass
class CentralityTable:
    metric: str
    values: dict
    normalized: bool = False

    def rows(self):
        return [(n, self.metric, self.values[n]) for n in sorted(self.values)]


def degree_table(G: Graph) -> CentralityTable:
    return CentralityTable("degree", {n: len(G.adjacency(n)) for n in G.nodes})


def strength_table(G: Graph) -> CentralityTable:
    return CentralityTable("strength", {n: math.fsum(G.adjacency(n).values()) for n in G.nodes})


def _accumulate(adj: Mapping, sources: Sequence) -> dict:
    bc = dict.fromkeys(adj, 0.0)
    for s in sources:
        stack = []
        preds = {s: []}
        sigma = {s: 1}
        dist = {s: 0}
        queue = deque([s])
        while queue:
            v = queue.popleft()
            stack.append(v)
            dv = dist[v] + 1
            for w in adj[v]:
                if w not in dist:
                    dist[w] = dv
                    sigma[w] = 0
                    preds[w] = []
                    queue.append(w)
                if dist[w] == dv:
                    sigma[w] += sigma[v]
                    preds[w].append(v)
        delta = dict.fromkeys(stack, 0.0)
        while stack:
            w = stack.pop()
            coeff = (1.0 + delta[w]) / sigma[w]
            for v in preds[w]:
                delta[v] += sigma[v] * coeff
            if w != s:
                bc[w] += delta[w]
    return bc


def _worker_count() -> int:
    raw = os.environ.get("COCITE_THREADS", "")
    try:
        return max(1, int(raw))
    except ValueError:
        return 1


def betweenness_all(G: Graph, normalized: bool = True, workers: int | None = None) -> CentralityTable:
    """Shortest-path betweenness of every node.

    Undirected pair counts are halved. Normalization divides by
    ``(n-1)(n-2)/2`` over the whole graph, not per component.
    """
    n = G.number_of_nodes()
    if normalized and n < 3:
        raise UndefinedMetricError(f"normalized betweenness undefined for n={n}")
    nodes = G.nodes
    adj = {v: sorted(G.adjacency(v)) for v in nodes}
    workers = workers or _worker_count()
    if workers > 1 and n > 200:
        chunks = [nodes[i::workers] for i in range(workers)]
        with ProcessPoolExecutor(max_workers=workers) as ex:
            parts = list(ex.map(_accumulate, [adj] * workers, chunks))
        raw = {v: math.fsum(p[v] for p in parts) for v in nodes}
    else:
        raw = _accumulate(adj, nodes)
    scale = 0.5
    if normalized:
        scale = 1.0 / ((n - 1) * (n - 2))
    return CentralityTable("betweenness", {v: raw[v] * scale for v in nodes}, normalized)


# -- natural breaks -----------------------------------------------------------

@dataclass
class BreaksClassification:
    """Contiguous classes over sorted values.

    ``boundaries[i]`` is the largest value of class ``i``; a value belongs
    to class ``i`` iff ``boundaries[i-1] < value <= boundaries[i]``.
    ``classes`` is parallel to the input value order.
    """
    boundaries: list[float]
    classes: list[int]
    gvf: float
    n_classes: int
    sse: float = 0.0
    values: list[float] = field(default_factory=list, repr=False)

    def classify(self, value: float) -> int:
        return bisect_left(self.boundaries, value)

    def members(self, cls: int) -> list[float]:
        return [v for v, c in zip(self.values, self.classes) if c == cls]


def _ge_with_tol(a: float, b: float, scale: float) -> bool:
    """True when ``a`` is not meaningfully smaller than ``b``."""
    return a >= b - TIE_RTOL * scale


def jenks_breaks(values: Sequence[float], n_classes: int) -> BreaksClassification:
    """Exact natural breaks: minimal total within-class squared deviation.

    Classes never split a run of equal values. Among optimal partitions the
    one with the earliest boundaries (lexicographically smallest cut
    positions) wins; deviations within ``TIE_RTOL`` of each other count as
    ties.
    """
    values = [float(v) for v in values]
    if not values:
        raise InfeasibleError("natural breaks need at least one value")
    if n_classes < 1:
        raise InfeasibleError("n_classes must be >= 1")
    distinct = sorted(set(values))
    d = len(distinct)
    if n_classes > d:
        raise InfeasibleError(f"{n_classes} classes requested but only {d} distinct values")

    counts = {v: 0 for v in distinct}
    for v in values:
        counts[v] += 1
    mean = math.fsum(values) / len(values)
    # Prefix sums over distinct values (centered to limit cancellation).
    pw, ps, pq = [0.0], [0.0], [0.0]
    for u in distinct:
        c, x = counts[u], u - mean
        pw.append(pw[-1] + c)
        ps.append(ps[-1] + c * x)
        pq.append(pq[-1] + c * x * x)

    def sse(i, j):  # distinct values i..j-1
        w = pw[j] - pw[i]
        s = ps[j] - ps[i]
        return max(0.0, (pq[j] - pq[i]) - s * s / w)

    total = sse(0, d)
    scale = max(total, 1e-300)
    k = n_classes
    inf = math.inf
    # best[m][i]: minimal cost of splitting distinct[i:] into m classes.
    best = [[inf] * (d + 1) for _ in range(k + 1)]
    best[0][d] = 0.0
    for m in range(1, k + 1):
        row, prev = best[m], best[m - 1]
        for i in range(d - m, -1, -1):
            top = d - (m - 1)
            row[i] = min(sse(i, j) + prev[j] for j in range(i + 1, top + 1))

    # Forward walk: first (smallest) cut within tolerance of the optimum.
    cuts = []
    i = 0
    for m in range(k, 1, -1):
        target = best[m][i]
        for j in range(i + 1, d - (m - 1) + 1):
            if not _ge_with_tol(target, sse(i, j) + best[m - 1][j], scale):
                continue
            cuts.append(j)
            i = j
            break
    bounds = [distinct[c - 1] for c in cuts]
    starts = [0] + cuts
    ends = cuts + [d]
    sdcm = math.fsum(sse(a, b) for a, b in zip(starts, ends))
    gvf = 1.0 if total <= 0 else max(0.0, min(1.0, 1.0 - sdcm / total))
    classes = [bisect_left(bounds, v) for v in values]
    return BreaksClassification(bounds, classes, gvf, k, sdcm, values)


def top_class(values: Mapping, n_classes: int) -> set:
    """Ids whose value lands in the highest natural-breaks class."""
    ids = sorted(values)
    cls = jenks_breaks([values[i] for i in ids], n_classes)
    top = n_classes - 1
    return {i for i, c in zip(ids, cls.classes) if c == top}


@dataclass
class HubClassification:
    high_degree: set
    high_betweenness: set
    high_both: set
    degree: CentralityTable
    betweenness: CentralityTable
    degree_breaks: BreaksClassification | None = None
    betweenness_breaks: BreaksClassification | None = None


def classify_hubs(G: Graph, n_classes: int, betweenness: CentralityTable | None = None) -> HubClassification:
    deg = degree_table(G)
    btw = betweenness or betweenness_all(G, normalized=True)
    ids = G.nodes
    deg_breaks = jenks_breaks([deg.values[i] for i in ids], n_classes)
    btw_breaks = jenks_breaks([btw.values[i] for i in ids], n_classes)
    top = n_classes - 1
    hd = {i for i, c in zip(ids, deg_breaks.classes) if c == top}
    hb = {i for i, c in zip(ids, btw_breaks.classes) if c == top}
    return HubClassification(hd, hb, hd & hb, deg, btw, deg_breaks, btw_breaks)
