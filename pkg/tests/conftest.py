"""Shared corpus builders for the test suite."""

from itertools import combinations

from pzf.graphs import Graph, is_connected


def all_connected_graphs(max_n: int):
    """Every labeled connected graph of order 1..max_n."""
    for n in range(1, max_n + 1):
        pairs = list(combinations(range(n), 2))
        for bits in range(1 << len(pairs)):
            edges = [pairs[k] for k in range(len(pairs)) if bits >> k & 1]
            g = Graph(n, edges)
            if is_connected(g):
                yield g


def random_connected_graph(rand, max_n: int = 10) -> Graph:
    """One connected G(n, p) sample; retries until connected."""
    n = rand.randint(2, max_n)
    p = rand.uniform(0.25, 0.75)
    while True:
        edges = [(u, v) for u in range(n) for v in range(u + 1, n)
                 if rand.random() < p]
        g = Graph(n, edges)
        if is_connected(g):
            return g
