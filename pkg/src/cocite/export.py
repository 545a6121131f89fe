"""Graph exchange: GraphML, edge-list CSV, and DOT."""
from __future__ import annotations

import csv
import math
from pathlib import Path

import networkx as nx

from .graph import BipartiteGraph, Graph


def node_size(n_papers: int) -> float:
    """Display size for field nodes: natural log of (1 + paper count)."""
    return math.log1p(n_papers)


def to_networkx(G: Graph) -> nx.Graph:
    H = nx.Graph()
    for n in G.nodes:
        H.add_node(n, **G.node_attrs(n))
    for u, v, w in G.edges():
        H.add_edge(u, v, weight=float(w))
    return H


def from_networkx(H: nx.Graph) -> Graph:
    G = Graph()
    for n, attrs in sorted(H.nodes(data=True), key=lambda t: t[0]):
        G.add_node(n, **attrs)
    for u, v, attrs in sorted(H.edges(data=True), key=lambda t: (min(t[0], t[1]), max(t[0], t[1]))):
        G.add_edge(u, v, attrs.get("weight", 1.0))
    return G


def export_graphml(G: Graph, path, node_attrs: dict | None = None):
    H = to_networkx(G)
    for n, attrs in (node_attrs or {}).items():
        H.nodes[n].update(attrs)
    nx.write_graphml(H, Path(path), encoding="utf-8", prettyprint=True)


def import_graphml(path) -> Graph:
    return from_networkx(nx.read_graphml(Path(path)))


def _fmt(x) -> str:
    if isinstance(x, float) and x.is_integer() and abs(x) < 1e15:
        return str(int(x))
    return repr(x) if isinstance(x, float) else str(x)


def export_csv(G: Graph, path):
    """Edge list ``source,target,weight``."""
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["source", "target", "weight"])
        for u, v, wt in G.edges():
            w.writerow([u, v, _fmt(wt)])


def import_csv(path, nodes=()) -> Graph:
    G = Graph(nodes)
    with open(path, newline="", encoding="utf-8") as fh:
        for row in csv.DictReader(fh):
            G.add_edge(row["source"], row["target"], float(row["weight"]))
    return G


def export_bipartite_csv(B: BipartiteGraph, path):
    with open(path, "w", newline="", encoding="utf-8") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(["left", "right"])
        w.writerows(B.edges())


def import_bipartite_csv(path) -> BipartiteGraph:
    with open(path, newline="", encoding="utf-8") as fh:
        return BipartiteGraph(edges=[(r["left"], r["right"]) for r in csv.DictReader(fh)])


def _dot_quote(x) -> str:
    return '"' + str(x).replace("\\", "\\\\").replace('"', '\\"') + '"'


def export_dot(G: Graph, path, name: str = "G"):
    lines = [f"graph {_dot_quote(name)} {{"]
    for n in G.nodes:
        attrs = "".join(f", {k}={_dot_quote(_fmt(v))}" for k, v in sorted(G.node_attrs(n).items()))
        lines.append(f"  {_dot_quote(n)} [label={_dot_quote(n)}{attrs}];")
    for u, v, w in G.edges():
        lines.append(f"  {_dot_quote(u)} -- {_dot_quote(v)} [weight={_dot_quote(_fmt(w))}];")
    lines.append("}")
    Path(path).write_text("\n".join(lines) + "\n", encoding="utf-8")
