import numpy as np
import pytest

from resistlab.graph import Graph, build_graph, connectivity_flags


def complete_graph(n: int, w: float = 1.0) -> Graph:
    return build_graph(
        [(i, j, w) for i in range(n) for j in range(i + 1, n)], n
    )


def path_graph(n: int, w: float = 1.0) -> Graph:
    return build_graph([(i, i + 1, w) for i in range(n - 1)], n)


def cycle_graph(n: int, w: float = 1.0) -> Graph:
    edges = [(i, (i + 1) % n, w) for i in range(n)]
    return build_graph([(min(a, b), max(a, b), w) for a, b, w in edges], n)


def star_graph(leaves: int, w: float = 1.0) -> Graph:
    return build_graph([(0, i + 1, w) for i in range(leaves)], leaves + 1)


def random_connected_graph(n: int, seed: int, weighted: bool = False) -> Graph:
    """Random spanning tree plus extra random edges; always connected."""
    rng = np.random.default_rng(seed)
    edges = {}
    order = rng.permutation(n)
    for idx in range(1, n):
        a = int(order[idx])
        b = int(order[rng.integers(0, idx)])
        edges[(min(a, b), max(a, b))] = 1.0
    extra = rng.integers(0, n, size=(2 * n, 2))
    for a, b in extra:
        a, b = int(a), int(b)
        if a != b:
            edges[(min(a, b), max(a, b))] = 1.0
    if weighted:
        for key in edges:
            edges[key] = float(rng.uniform(0.2, 3.0))
    g = build_graph([(a, b, w) for (a, b), w in edges.items()], n)
    assert connectivity_flags(g)[0]
    return g


@pytest.fixture
def k10():
    return complete_graph(10)
