"""Time betweenness on random graphs, serial vs process pool.

Usage: python scripts/bench_betweenness.py [n] [p] [workers]
"""
import itertools
import random
import sys
import time

from cocite.centrality import betweenness_all
from cocite.graph import Graph


def main():
    n = int(sys.argv[1]) if len(sys.argv) > 1 else 1000
    p = float(sys.argv[2]) if len(sys.argv) > 2 else 0.006
    workers = int(sys.argv[3]) if len(sys.argv) > 3 else 4
    rng = random.Random(0)
    G = Graph(range(n), [(u, v) for u, v in itertools.combinations(range(n), 2) if rng.random() < p])
    print(f"n={n} m={G.number_of_edges()}")
    timings = {}
    for w in (1, workers):
        t0 = time.perf_counter()
        res = betweenness_all(G, workers=w)
        timings[w] = time.perf_counter() - t0
        print(f"workers={w}: {timings[w]:.2f}s  max={max(res.values.values()):.4f}")


if __name__ == "__main__":
    main()
