"""Random network generators shared by the test modules."""

from __future__ import annotations

import numpy as np

from signctrl.graph import Graph, SignedNetwork


def _connected(n, edges):
    parent = list(range(n + 1))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    for i, j in edges:
        parent[find(i)] = find(j)
    return len({find(i) for i in range(1, n + 1)}) == 1


def random_network(rng: np.random.Generator, n: int, m: int, p: float = 0.4) -> SignedNetwork:
    """Connected network on n states with m inputs and random edge signs."""
    pairs = [(i, j) for i in range(1, n + 1) for j in range(i + 1, n + 1)]
    while True:
        edges = [e for e in pairs if rng.random() < p]
        if _connected(n, edges):
            break
    signs = {e: ("+" if rng.random() < 0.5 else "-") for e in edges}
    inputs = tuple(int(x) for x in rng.choice(np.arange(1, n + 1), size=m, replace=False))
    return SignedNetwork(n, signs, inputs)


def corpus(count: int = 500, seed: int = 2024):
    """Connected networks with n in [3, 10] and m in [1, 3]."""
    rng = np.random.default_rng(seed)
    out = []
    for _ in range(count):
        n = int(rng.integers(3, 11))
        m = int(rng.integers(1, 4))
        out.append(random_network(rng, n, m))
    return out


def random_part(rng: np.random.Generator, n: int, offset: int, p: float = 0.5, max_inputs: int = 2) -> Graph:
    """Graph on states offset+1..offset+n; input node ids start at 1000."""
    states = list(range(offset + 1, offset + n + 1))
    edges = frozenset((a, b) for a in states for b in states if a < b and rng.random() < p)
    m = int(rng.integers(1, min(max_inputs, n) + 1))
    driven = [int(x) for x in rng.choice(states, size=m, replace=False)]
    input_edges = frozenset((s, 1000 + s) for s in driven)
    return Graph(frozenset(states), frozenset(u for _, u in input_edges), edges, input_edges)
