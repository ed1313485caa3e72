"""Undirected multigraphs, orientations and component counting."""

from __future__ import annotations

import random
from dataclasses import dataclass
from typing import Iterable, Sequence

from .errors import ContractViolation, SchemaError

__all__ = [
    "Graph",
    "Orientation",
    "complete_graph",
    "cycle_graph",
    "path_graph",
    "components",
    "graph_rank",
    "default_orientation",
    "random_orientation",
]


@dataclass(frozen=True)
class Graph:
    """Vertices ``0..n_vertices-1`` and an edge list; loops and parallel edges allowed."""

    n_vertices: int
    edges: tuple[tuple[int, int], ...]

    def __post_init__(self):
        if self.n_vertices < 0:
            raise ContractViolation("negative vertex count")
        edges = tuple((int(u), int(v)) for u, v in self.edges)
        for i, (u, v) in enumerate(edges):
            if not (0 <= u < self.n_vertices and 0 <= v < self.n_vertices):
                raise ContractViolation(f"edge {i} = {(u, v)} has a vertex out of range")
        object.__setattr__(self, "edges", edges)

    @property
    def n_edges(self) -> int:
        return len(self.edges)

    @property
    def simple(self) -> bool:
        seen = set()
        for u, v in self.edges:
            if u == v:
                return False
            key = (min(u, v), max(u, v))
            if key in seen:
                return False
            seen.add(key)
        return True

    def to_json(self) -> dict:
        return {"vertices": self.n_vertices, "edges": [list(e) for e in self.edges]}

    @classmethod
    def from_json(cls, obj, path: str = "$") -> "Graph":
        if not isinstance(obj, dict):
            raise SchemaError(path, "graph must be an object")
        n = obj.get("vertices")
        if not isinstance(n, int) or isinstance(n, bool) or n < 0:
            raise SchemaError(f"{path}.vertices", "expected a non-negative integer")
        edges = obj.get("edges")
        if not isinstance(edges, list):
            raise SchemaError(f"{path}.edges", "expected a list of [u, v] pairs")
        out = []
        for i, e in enumerate(edges):
            if (not isinstance(e, list) or len(e) != 2
                    or not all(isinstance(x, int) and not isinstance(x, bool) for x in e)):
                raise SchemaError(f"{path}.edges[{i}]", "expected [u, v] with integer vertices")
            if not all(0 <= x < n for x in e):
                raise SchemaError(f"{path}.edges[{i}]", f"vertex out of range 0..{n - 1}")
            out.append((e[0], e[1]))
        extra = set(obj) - {"vertices", "edges"}
        if extra:
            raise SchemaError(path, f"unexpected keys {sorted(extra)}")
        return cls(n, tuple(out))


# per-edge (tail, head) pairs
Orientation = tuple[tuple[int, int], ...]


def complete_graph(n: int) -> Graph:
    return Graph(n, tuple((i, j) for i in range(n) for j in range(i + 1, n)))


def cycle_graph(n: int) -> Graph:
    if n < 3:
        raise ContractViolation("a simple cycle needs at least 3 vertices")
    return Graph(n, tuple((i, (i + 1) % n) for i in range(n)))


def path_graph(n: int) -> Graph:
    return Graph(n, tuple((i, i + 1) for i in range(n - 1)))


def _edge_indices(g: Graph, edge_subset) -> Iterable[int]:
    if isinstance(edge_subset, int):
        if edge_subset < 0 or edge_subset >> g.n_edges:
            raise ContractViolation("edge bitset wider than the edge list")
        return (i for i in range(g.n_edges) if edge_subset >> i & 1)
    return edge_subset


def components(g: Graph, edge_subset=None) -> int:
    """Connected components of ``(V, A)`` on all vertices; ``A`` is a bitset or index list."""
    parent = list(range(g.n_vertices))

    def find(x: int) -> int:
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    count = g.n_vertices
    idx = range(g.n_edges) if edge_subset is None else _edge_indices(g, edge_subset)
    for i in idx:
        u, v = g.edges[i]
        ru, rv = find(u), find(v)
        if ru != rv:
            parent[ru] = rv
            count -= 1
    return count


def graph_rank(g: Graph, edge_subset=None) -> int:
    return g.n_vertices - components(g, edge_subset)


def default_orientation(g: Graph) -> Orientation:
    """Each edge directed from its smaller to its larger endpoint."""
    return tuple((min(u, v), max(u, v)) for u, v in g.edges)


def random_orientation(g: Graph, rng: random.Random) -> Orientation:
    return tuple((u, v) if rng.random() < 0.5 else (v, u) for u, v in g.edges)


def check_orientation(g: Graph, orientation: Sequence[tuple[int, int]]) -> Orientation:
    orientation = tuple((int(a), int(b)) for a, b in orientation)
    if len(orientation) != g.n_edges:
        raise ContractViolation("orientation length differs from the edge count")
    for i, ((u, v), (a, b)) in enumerate(zip(g.edges, orientation)):
        if {a, b} != {u, v}:
            raise ContractViolation(f"orientation of edge {i} changes its endpoints")
    return orientation
