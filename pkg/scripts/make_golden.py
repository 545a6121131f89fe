"""Freeze golden expectations for the synthetic fixture from brute-force oracles.

Reads the fixture with the csv module and computes everything through
tests/oracles.py; the cocite package is never imported, so the golden file
is an independent check on the pipeline.

Usage: python scripts/make_golden.py [fixture_dir]
"""
import csv
import itertools
import json
import sys
from collections import Counter, defaultdict
from pathlib import Path

ROOT = Path(__file__).resolve().parents[1]
sys.path.insert(0, str(ROOT / "tests"))
import oracles  # noqa: E402

FIX = Path(sys.argv[1]) if len(sys.argv) > 1 else ROOT / "fixtures" / "synthetic"
MIN_YEAR, S_MIN, F_MIN, K, CLASSES = 1962, 2, 5, 3, 3


def rows(name):
    with open(FIX / name, newline="", encoding="utf-8") as fh:
        return list(csv.DictReader(fh))


def main():
    studies = rows("studies.csv")
    pubs = {r["publication_id"]: r for r in rows("publications.csv")}
    links = sorted({(r["publication_id"], r["study_id"]) for r in rows("citations.csv")})
    links = [(p, s) for p, s in links if not pubs[p]["year"] or int(pubs[p]["year"]) >= MIN_YEAR]

    to_ds = {s["study_id"]: s["series_id"] or s["study_id"] for s in studies}
    terms = defaultdict(list)
    for s in studies:
        terms[to_ds[s["study_id"]]] += [t for t in s["subject_terms"].split(";") if t]

    pairs = sorted({(p, to_ds[s]) for p, s in links})
    weights = oracles.projection(pairs)
    s_edges = [(u, v) for (u, v), w in weights.items() if w >= S_MIN]
    s_nodes = sorted({x for e in s_edges for x in e})
    comms = oracles.k_clique_communities(s_nodes, s_edges, K)
    comms = sorted(comms, key=lambda c: (-len(c), sorted(c)))
    membership = Counter(n for c in comms for n in c)
    comps = oracles.components(s_nodes, s_edges)

    labels = []
    for c in comms:
        cnt = Counter(t for n in c for t in terms[n])
        labels.append(", ".join(t for t, _ in sorted(cnt.items(), key=lambda kv: (-kv[1], kv[0]))[:3]))

    btw = oracles.betweenness(s_nodes, s_edges)
    deg = {n: len(oracles.adjacency(s_nodes, s_edges)[n]) for n in s_nodes}
    dcls = oracles.jenks([deg[n] for n in s_nodes], CLASSES)
    bcls = oracles.jenks([btw[n] for n in s_nodes], CLASSES)
    high_both = sorted(n for n, a, b in zip(s_nodes, dcls, bcls) if a == b == CLASSES - 1)
    multi = sorted(n for n, c in membership.items() if c >= 2)
    crossroads = sorted(set(multi) | set(high_both))
    subdivisions = [i for i, c in enumerate(comms) if frozenset(c) in comps]

    cites = defaultdict(set)
    for p, s in links:
        cites[p].add(s)
    fw = Counter()
    for p, studs in cites.items():
        codes = sorted(set(c for c in pubs[p]["for_codes"].split(";") if c))
        for f, g in itertools.combinations(codes, 2):
            fw[f, g] += len(studs)
    f_edges = [(u, v, float(w)) for (u, v), w in sorted(fw.items()) if w >= F_MIN]
    f_nodes = sorted({x for e in f_edges for x in e[:2]})
    f_best, f_q = oracles.best_partition(f_nodes, f_edges)

    golden = {
        "s_nodes": s_nodes,
        "s_edges": len(s_edges),
        "s_components": len(comps),
        "s_density": oracles.density(s_nodes, s_edges),
        "s_transitivity": oracles.transitivity(s_nodes, s_edges),
        "s_assortativity": oracles.assortativity(s_nodes, s_edges),
        "communities": [sorted(c) for c in comms],
        "labels": labels,
        "multi_membership": multi,
        "high_both": high_both,
        "crossroads": crossroads,
        "subdivisions": subdivisions,
        "betweenness": btw,
        "f_nodes": f_nodes,
        "f_edges": len(f_edges),
        "f_best_partition": f_best,
        "f_best_modularity": f_q,
    }
    (FIX / "golden.json").write_text(json.dumps(golden, indent=2, sort_keys=True) + "\n", encoding="utf-8")
    print(json.dumps(golden, indent=2, sort_keys=True))


if __name__ == "__main__":
    main()
