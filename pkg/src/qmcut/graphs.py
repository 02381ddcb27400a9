"""Weighted interaction graphs: parsing, validation, normalization, adjacency.

Input format is a plain edge list. An optional header line ``n <count>``
declares the vertex count so that isolated vertices can be represented;
without it the count is inferred from the largest index. Remaining lines are
``i j w`` with 0-based vertex indices and a non-negative decimal weight.
Lines starting with ``#`` (and blank lines) are ignored. Zero-weight edges
are dropped at parse time.
"""

from __future__ import annotations

from dataclasses import dataclass


class GraphFormatError(ValueError):
    """Raised for malformed or inconsistent edge-list input."""


@dataclass(frozen=True)
class WeightedGraph:
    """Immutable weighted graph with canonical edges (i < j, w >= 0)."""

    n: int
    edges: tuple[tuple[int, int, float], ...]

    def __post_init__(self):
        if self.n < 1:
            raise GraphFormatError(f"vertex count must be positive, got {self.n}")
        seen = set()
        for (i, j, w) in self.edges:
            if not (0 <= i < j < self.n):
                raise GraphFormatError(f"edge ({i},{j}) violates 0 <= i < j < n={self.n}")
            if w < 0:
                raise GraphFormatError(f"edge ({i},{j}) has negative weight {w}")
            if (i, j) in seen:
                raise GraphFormatError(f"duplicate edge ({i},{j})")
            seen.add((i, j))

    @property
    def total_weight(self) -> float:
        return sum(w for (_, _, w) in self.edges)

    def weight(self, i: int, j: int) -> float:
        a, b = (i, j) if i < j else (j, i)
        for (u, v, w) in self.edges:
            if (u, v) == (a, b):
                return w
        raise KeyError(f"no edge ({i},{j})")


def parse_graph(text: str) -> WeightedGraph:
    """Parse edge-list text into a canonical WeightedGraph.

    Raises GraphFormatError (with the offending line number) on negative
    weights, self-loops, duplicate edges, or out-of-range indices.
    """
    n_declared = None
    raw_edges = []
    max_index = -1
    for lineno, line in enumerate(text.splitlines(), start=1):
        stripped = line.strip()
        if not stripped or stripped.startswith("#"):
            continue
        parts = stripped.split()
        if parts[0] == "n":
            if n_declared is not None:
                raise GraphFormatError(f"line {lineno}: repeated 'n' header")
            if raw_edges:
                raise GraphFormatError(f"line {lineno}: 'n' header must precede edges")
            if len(parts) != 2:
                raise GraphFormatError(f"line {lineno}: header must be 'n <count>'")
            try:
                n_declared = int(parts[1])
            except ValueError:
                raise GraphFormatError(f"line {lineno}: bad vertex count {parts[1]!r}") from None
            if n_declared < 1:
                raise GraphFormatError(f"line {lineno}: vertex count must be positive")
            continue
        if len(parts) != 3:
            raise GraphFormatError(f"line {lineno}: expected 'i j w', got {stripped!r}")
        try:
            i, j = int(parts[0]), int(parts[1])
            w = float(parts[2])
        except ValueError:
            raise GraphFormatError(f"line {lineno}: could not parse {stripped!r}") from None
        if i == j:
            raise GraphFormatError(f"line {lineno}: self-loop on vertex {i}")
        if i < 0 or j < 0:
            raise GraphFormatError(f"line {lineno}: negative vertex index")
        if w < 0:
            raise GraphFormatError(f"line {lineno}: negative weight {w}")
        a, b = (i, j) if i < j else (j, i)
        for (u, v, _, ln) in raw_edges:
            if (u, v) == (a, b):
                raise GraphFormatError(f"line {lineno}: duplicate edge ({a},{b}) first seen on line {ln}")
        raw_edges.append((a, b, w, lineno))
        max_index = max(max_index, b)
    if n_declared is None:
        if max_index < 0:
            raise GraphFormatError("empty graph: no header and no edges")
        n = max_index + 1
    else:
        n = n_declared
        for (a, b, _, lineno) in raw_edges:
            if b >= n:
                raise GraphFormatError(f"line {lineno}: vertex {b} out of range for n={n}")
    edges = tuple((a, b, w) for (a, b, w, _) in sorted(raw_edges) if w > 0)
    return WeightedGraph(n=n, edges=edges)


def serialize_graph(g: WeightedGraph) -> str:
    """Inverse of parse_graph; weights written with repr for exact round-trips."""
    lines = [f"n {g.n}"]
    lines.extend(f"{i} {j} {w!r}" for (i, j, w) in g.edges)
    return "\n".join(lines) + "\n"


def normalize_weights(g: WeightedGraph) -> WeightedGraph:
    """Rescale weights to total 1. Idempotent; errors on all-zero total."""
    total = g.total_weight
    if total <= 0:
        raise GraphFormatError("cannot normalize: graph has no positive-weight edges")
    edges = tuple((i, j, w / total) for (i, j, w) in g.edges)
    return WeightedGraph(n=g.n, edges=edges)


def neighbors(g: WeightedGraph, v: int) -> tuple[int, ...]:
    """Vertices adjacent to v, ascending."""
    if not (0 <= v < g.n):
        raise GraphFormatError(f"vertex {v} out of range for n={g.n}")
    out = set()
    for (i, j, _) in g.edges:
        if i == v:
            out.add(j)
        elif j == v:
            out.add(i)
    return tuple(sorted(out))


def edge_key(i: int, j: int) -> tuple[int, int]:
    """Canonical (min, max) ordering used for all per-edge maps."""
    return (i, j) if i < j else (j, i)
