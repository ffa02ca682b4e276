from __future__ import annotations

import random

import numpy as np
import pytest

from aoinet import Graph, all_pairs_distances, from_edges, load_edge_list


def random_connected(rng: random.Random, n: int, extra: int = 0, weighted: bool = False) -> Graph:
    """Random spanning tree on n nodes plus up to ``extra`` chords."""
    if n < 1:
        raise ValueError("need at least one node")
    edges: list[tuple[int, int, int]] = []
    for v in range(1, n):
        u = rng.randrange(v)
        d = rng.randint(1, 4) if weighted else 1
        edges.append((u, v, d))
    seen = {(u, v) for u, v, _ in edges}
    for _ in range(extra if n >= 2 else 0):
        u, v = rng.sample(range(n), 2)
        if u > v:
            u, v = v, u
        if (u, v) in seen:
            continue
        seen.add((u, v))
        edges.append((u, v, rng.randint(1, 4) if weighted else 1))
    return from_edges(edges, node_count=n)


def floyd_warshall(g: Graph) -> np.ndarray:
    # Independent of the library's BFS/Dijkstra path on purpose.
    n = g.node_count
    dist = np.full((n, n), np.inf)
    np.fill_diagonal(dist, 0.0)
    for u, v, d in g.edges:
        dist[u, v] = min(dist[u, v], float(d))
        dist[v, u] = min(dist[v, u], float(d))
    for w in range(n):
        dist = np.minimum(dist, dist[:, [w]] + dist[[w], :])
    return dist


def brute_peak_and_avg(g: Graph, schedule, a0, t_end: int) -> tuple[float, float]:
    """Metrics straight from the message-passing oracle."""
    from aoinet import Horizon, oracle_average, oracle_peak, simulate_oracle

    series = simulate_oracle(g, schedule, Horizon(end=t_end, a0=a0))
    return oracle_peak(series)[0], oracle_average(series)[0]


# Tree on labels 1..9: node 5 is a hub with arms 5-1-2-3, 5-4, 5-9 and
# 5-6-7-8. Labels compact to index = label - 1.
NINE_NODE_TEXT = "5 1\n5 4\n5 6\n5 9\n6 7\n7 8\n2 3\n1 2\n"


@pytest.fixture
def nine_node() -> Graph:
    return load_edge_list(NINE_NODE_TEXT)


@pytest.fixture
def nine_node_distances(nine_node: Graph):
    return all_pairs_distances(nine_node)
