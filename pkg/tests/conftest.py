import itertools
import random
import sys
from pathlib import Path

import pytest
from hypothesis import strategies as st

sys.path.insert(0, str(Path(__file__).parent))

from cocite.graph import Graph  # noqa: E402

ROOT = Path(__file__).resolve().parents[1]
FIXTURE = ROOT / "fixtures" / "synthetic"

BOWTIE_EDGES = [("a", "b"), ("a", "c"), ("b", "c"), ("c", "d"), ("c", "e"), ("d", "e")]


def k4_bridge_edges():
    edges = [(a, b) for a, b in itertools.combinations(range(4), 2)]
    edges += [(a + 4, b + 4) for a, b in itertools.combinations(range(4), 2)]
    return edges + [(3, 4)]


def random_edges(n, p, rng, weighted=False):
    out = []
    for u, v in itertools.combinations(range(n), 2):
        if rng.random() < p:
            out.append((u, v, rng.choice([0.5, 1.0, 2.0, 3.0, 7.25]) if weighted else 1.0))
    return out


def random_graph(n, p, seed, weighted=False):
    rng = random.Random(seed)
    edges = random_edges(n, p, rng, weighted)
    return Graph(range(n), edges), list(range(n)), edges


@st.composite
def small_graphs(draw, max_nodes=12, min_nodes=1):
    n = draw(st.integers(min_value=min_nodes, max_value=max_nodes))
    pairs = list(itertools.combinations(range(n), 2))
    mask = draw(st.lists(st.booleans(), min_size=len(pairs), max_size=len(pairs)))
    edges = [(u, v) for (u, v), keep in zip(pairs, mask) if keep]
    return list(range(n)), edges


@pytest.fixture
def bowtie():
    return Graph("abcde", BOWTIE_EDGES)


@pytest.fixture
def triangle():
    return Graph("abc", [("a", "b"), ("b", "c"), ("a", "c")])


@pytest.fixture
def path3():
    return Graph("abc", [("a", "b"), ("b", "c")])


@pytest.fixture
def two_k4():
    return Graph(range(8), k4_bridge_edges())


@pytest.fixture
def fixture_dir():
    return FIXTURE


def pytest_terminal_summary(terminalreporter):
    acc = sys.modules.get("test_acceptance")
    if acc is None or not acc.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for name, ok, detail in acc.RESULTS:
        status = {True: "PASS", False: "FAIL", None: "SKIP"}[ok]
        terminalreporter.write_line(f"{status} {name}: {detail}")
