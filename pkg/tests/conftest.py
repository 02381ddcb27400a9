"""Shared test fixtures: the instance corpus and a session-wide solve cache.

Solving the relaxation dominates suite runtime, so each (instance, kind)
pair is solved exactly once per session and shared by every test module.
"""

from __future__ import annotations

import itertools

import numpy as np
import pytest

from qmcut.graphs import WeightedGraph, normalize_weights
from qmcut.sdp import build_sdp, solve_sdp


def star(m: int) -> WeightedGraph:
    return normalize_weights(
        WeightedGraph(n=m + 1, edges=tuple((0, k, 1.0) for k in range(1, m + 1)))
    )


def path(n: int) -> WeightedGraph:
    return normalize_weights(
        WeightedGraph(n=n, edges=tuple((i, i + 1, 1.0) for i in range(n - 1)))
    )


def cycle(n: int) -> WeightedGraph:
    edges = [(i, i + 1, 1.0) for i in range(n - 1)] + [(0, n - 1, 1.0)]
    return normalize_weights(WeightedGraph(n=n, edges=tuple(edges)))


def complete(n: int) -> WeightedGraph:
    return normalize_weights(
        WeightedGraph(n=n, edges=tuple((i, j, 1.0) for i, j in itertools.combinations(range(n), 2)))
    )


def random_graph(n: int, p: float, seed: int, weighted: bool = True) -> WeightedGraph:
    """Erdos-Renyi with uniform random weights; resamples until non-empty."""
    rng = np.random.default_rng(seed)
    while True:
        edges = []
        for i, j in itertools.combinations(range(n), 2):
            if rng.random() < p:
                w = rng.uniform(0.2, 1.0) if weighted else 1.0
                edges.append((i, j, w))
        if edges:
            return normalize_weights(WeightedGraph(n=n, edges=tuple(edges)))


def random_triangle_free(n: int, p: float, seed: int) -> WeightedGraph:
    """Random graph with every closing-a-triangle edge rejected."""
    rng = np.random.default_rng(seed)
    while True:
        adj = {v: set() for v in range(n)}
        edges = []
        for i, j in itertools.combinations(range(n), 2):
            if rng.random() < p and not (adj[i] & adj[j]):
                edges.append((i, j, rng.uniform(0.2, 1.0)))
                adj[i].add(j)
                adj[j].add(i)
        if edges:
            return normalize_weights(WeightedGraph(n=n, edges=tuple(edges)))


def bipartition(g: WeightedGraph):
    """2-coloring (side-0 set) if g is bipartite, else None."""
    color = {}
    for start in range(g.n):
        if start in color:
            continue
        color[start] = 0
        queue = [start]
        while queue:
            v = queue.pop()
            for (i, j, _) in g.edges:
                if v in (i, j):
                    u = j if v == i else i
                    if u not in color:
                        color[u] = 1 - color[v]
                        queue.append(u)
                    elif color[u] == color[v]:
                        return None
    return frozenset(v for v, c in color.items() if c == 0)


def corpus_instances() -> list[tuple[str, WeightedGraph]]:
    """30 instances: stars, paths, cycles, complete graphs, random graphs."""
    out = []
    for m in range(1, 7):
        out.append((f"star{m}", star(m)))
    for n in range(3, 7):
        out.append((f"path{n}", path(n)))
    for n in range(4, 9):
        out.append((f"cycle{n}", cycle(n)))
    for n in range(3, 9):
        out.append((f"complete{n}", complete(n)))
    specs = [(4, 0.7, 11), (5, 0.6, 12), (5, 0.8, 13), (6, 0.5, 14), (6, 0.7, 15),
             (7, 0.4, 16), (7, 0.6, 17), (8, 0.35, 18), (8, 0.5, 19)]
    for (n, p, seed) in specs:
        out.append((f"random{n}_{seed}", random_graph(n, p, seed)))
    return out


_CORPUS = corpus_instances()
_SOLVED: dict[tuple[str, str], object] = {}


def solve_cached(name: str, g: WeightedGraph, kind: str):
    key = (name, kind)
    if key not in _SOLVED:
        _SOLVED[key] = solve_sdp(build_sdp(g, kind))
    return _SOLVED[key]


@pytest.fixture(scope="session")
def corpus():
    return _CORPUS


@pytest.fixture(scope="session")
def solved():
    """Callable (name, graph, kind) -> cached SDPSolution."""
    return solve_cached


@pytest.fixture(scope="session")
def bipartite_corpus(corpus):
    out = []
    for name, g in corpus:
        sides = bipartition(g)
        if sides is not None and g.edges:
            out.append((name, g, sides))
    return out
