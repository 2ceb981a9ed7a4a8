"""Immutable simple-graph values used by every other module.

Vertices are dense integers 0..n-1.  Human-readable names ("a", "c'", ...)
are carried as optional label metadata and never participate in any
algorithm.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property
from typing import Iterable, Mapping

from .errors import GraphConstructionError

Edge = tuple[int, int]


def normalize_edge(u: int, v: int) -> Edge:
    """Order an endpoint pair; loops are rejected."""
    if u == v:
        raise GraphConstructionError(f"loop at vertex {u} is not allowed")
    return (u, v) if u < v else (v, u)


@dataclass(frozen=True)
class Graph:
    """A finite simple undirected graph.

    ``edges`` is always sorted with u < v in each pair, so two equal
    graphs compare equal field-by-field.  Instances are immutable; all
    "mutations" below return new graphs.
    """

    n: int
    edges: tuple[Edge, ...]
    labels: tuple[tuple[int, str], ...] | None = None

    @property
    def m(self) -> int:
        return len(self.edges)

    @cached_property
    def edge_set(self) -> frozenset[Edge]:
        return frozenset(self.edges)

    @cached_property
    def neighbor_sets(self) -> tuple[frozenset[int], ...]:
        nbrs: list[set[int]] = [set() for _ in range(self.n)]
        for u, v in self.edges:
            nbrs[u].add(v)
            nbrs[v].add(u)
        return tuple(frozenset(s) for s in nbrs)

    @cached_property
    def adj(self) -> tuple[tuple[int, ...], ...]:
        """Sorted adjacency lists."""
        return tuple(tuple(sorted(s)) for s in self.neighbor_sets)

    @cached_property
    def label_map(self) -> dict[int, str]:
        return dict(self.labels) if self.labels else {}

    def has_edge(self, u: int, v: int) -> bool:
        return normalize_edge(u, v) in self.edge_set

    def degree(self, v: int) -> int:
        return len(self.neighbor_sets[v])

    def vertex_by_label(self, name: str) -> int:
        for v, label in self.labels or ():
            if label == name:
                return v
        raise KeyError(f"no vertex labeled {name!r}")

    def relabeled(self, perm: Mapping[int, int] | list[int]) -> "Graph":
        """Return the graph with vertex v renamed to perm[v]."""
        mapping = {v: perm[v] for v in range(self.n)}
        if sorted(mapping.values()) != list(range(self.n)):
            raise GraphConstructionError("relabeling is not a permutation")
        edges = [normalize_edge(mapping[u], mapping[v]) for u, v in self.edges]
        labels = None
        if self.labels is not None:
            labels = tuple(sorted((mapping[v], s) for v, s in self.labels))
        return Graph(self.n, tuple(sorted(edges)), labels)


def build_graph(
    n: int,
    edges: Iterable[tuple[int, int]],
    labels: Mapping[int, str] | None = None,
) -> Graph:
    """Validate and construct a :class:`Graph`.

    Raises :class:`GraphConstructionError` naming the offending pair on a
    loop, an out-of-range endpoint, or a duplicate edge.
    """
    if n < 0:
        raise GraphConstructionError(f"vertex count must be >= 0, got {n}")
    seen: set[Edge] = set()
    normalized: list[Edge] = []
    for u, v in edges:
        if not (0 <= u < n) or not (0 <= v < n):
            raise GraphConstructionError(
                f"edge ({u}, {v}) has an endpoint outside 0..{n - 1}"
            )
        e = normalize_edge(u, v)
        if e in seen:
            raise GraphConstructionError(f"duplicate edge ({u}, {v})")
        seen.add(e)
        normalized.append(e)
    label_tuple = None
    if labels is not None:
        for v in labels:
            if not (0 <= v < n):
                raise GraphConstructionError(f"label on unknown vertex {v}")
        label_tuple = tuple(sorted(labels.items()))
    return Graph(n, tuple(sorted(normalized)), label_tuple)


def remove_edge(g: Graph, u: int, v: int) -> Graph:
    e = normalize_edge(u, v)
    if e not in g.edge_set:
        raise GraphConstructionError(f"edge ({u}, {v}) not present")
    return Graph(g.n, tuple(x for x in g.edges if x != e), g.labels)


def add_edges(g: Graph, new: Iterable[tuple[int, int]]) -> Graph:
    edges = list(g.edges)
    for u, v in new:
        edges.append((u, v))
    labels = dict(g.labels) if g.labels else None
    return build_graph(g.n, edges, labels)


def delete_vertex(g: Graph, v: int) -> tuple[Graph, dict[int, int]]:
    """Delete one vertex, compacting indices.

    Returns the new graph and the old-to-new vertex map.
    """
    if not (0 <= v < g.n):
        raise GraphConstructionError(f"vertex {v} outside 0..{g.n - 1}")
    remap = {u: (u if u < v else u - 1) for u in range(g.n) if u != v}
    edges = [
        (remap[a], remap[b]) for a, b in g.edges if a != v and b != v
    ]
    labels = None
    if g.labels is not None:
        labels = {remap[u]: s for u, s in g.labels if u != v}
    return build_graph(g.n - 1, edges, labels), remap


def contract_edge(g: Graph, u: int, v: int) -> Graph:
    """Contract an edge, merging v into u and compacting indices.

    Parallel edges created by the merge collapse into single edges; this
    is the usual minor operation, unlike paste where collisions are
    errors.
    """
    e = normalize_edge(u, v)
    if e not in g.edge_set:
        raise GraphConstructionError(f"edge ({u}, {v}) not present")
    u, v = e
    remap = {w: (w if w < v else w - 1) for w in range(g.n) if w != v}
    merged: set[Edge] = set()
    for a, b in g.edges:
        a2 = remap[u] if a == v else remap[a]
        b2 = remap[u] if b == v else remap[b]
        if a2 != b2:
            merged.add(normalize_edge(a2, b2))
    labels = None
    if g.labels is not None:
        labels = {remap[w]: s for w, s in g.labels if w != v}
    return build_graph(g.n - 1, sorted(merged), labels)


def add_apex(g: Graph, targets: Iterable[int]) -> Graph:
    """Add one new vertex adjacent to ``targets``.

    Used to test whether a set of vertices can share a face: the graph
    stays planar after adding an apex joined to all of them exactly when
    they are co-facial in some embedding.
    """
    apex = g.n
    edges = list(g.edges) + [(t, apex) for t in targets]
    labels = dict(g.labels) if g.labels else None
    return build_graph(g.n + 1, edges, labels)
