"""Seeded force-directed (Fruchterman-Reingold) layout."""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .graph import Graph


@dataclass
class LayoutResult:
    coordinates: dict
    bbox: tuple[float, float, float, float]  # (xmin, ymin, xmax, ymax)

    def rows(self):
        return [(n, x, y) for n, (x, y) in sorted(self.coordinates.items())]


def spring_layout(G: Graph, iterations: int = 500, seed: int = 0,
                  t_start: float = 0.1, t_end: float = 1e-4) -> LayoutResult:
    """Attraction ``d^2/k`` along edges, repulsion ``k^2/d`` between all pairs,
    with displacement capped by a geometrically cooling temperature.

    Weights are ignored. Output is centered on the origin and scaled so the
    largest absolute coordinate is 1.
    """
    if iterations < 1:
        raise ValueError("iterations must be >= 1")
    nodes = G.nodes
    n = len(nodes)
    if n == 0:
        return LayoutResult({}, (0.0, 0.0, 0.0, 0.0))
    if n == 1:
        return LayoutResult({nodes[0]: (0.0, 0.0)}, (0.0, 0.0, 0.0, 0.0))

    index = {v: i for i, v in enumerate(nodes)}
    A = np.zeros((n, n))
    for u, v, _ in G.edges():
        A[index[u], index[v]] = A[index[v], index[u]] = 1.0
    rng = np.random.default_rng(seed)
    pos = rng.random((n, 2))
    k = np.sqrt(1.0 / n)
    cooling = (t_end / t_start) ** (1.0 / max(1, iterations - 1))
    t = t_start
    for _ in range(iterations):
        delta = pos[:, None, :] - pos[None, :, :]
        dist = np.linalg.norm(delta, axis=-1)
        np.fill_diagonal(dist, 1.0)
        dist = np.maximum(dist, 1e-6)
        force = k * k / dist**2 - A * dist / k
        np.fill_diagonal(force, 0.0)
        disp = np.einsum("ij,ijd->id", force, delta)
        length = np.maximum(np.linalg.norm(disp, axis=1), 1e-12)
        pos += disp * (np.minimum(length, t) / length)[:, None]
        t *= cooling
    pos -= pos.mean(axis=0)
    span = np.abs(pos).max()
    if span > 0:
        pos /= span
    coords = {v: (float(pos[i, 0]), float(pos[i, 1])) for v, i in index.items()}
    lo, hi = pos.min(axis=0), pos.max(axis=0)
    return LayoutResult(coords, (float(lo[0]), float(lo[1]), float(hi[0]), float(hi[1])))
