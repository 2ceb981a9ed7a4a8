"""Exact canonical forms via individualization and refinement.

Two graphs are isomorphic exactly when their canonical forms are equal.
The form is the lexicographically smallest graph6 encoding over every
labeling reachable from the equitable-refinement search tree, which is
the full orbit of labelings up to automorphism, so the result is exact
rather than a hash heuristic.
"""

from __future__ import annotations

import hashlib
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from .formats import encode_graph6
from .graphs import Graph

Cells = list[list[int]]


@dataclass(frozen=True)
class CanonicalForm:
    """Canonical representative of an isomorphism class."""

    data: bytes

    @cached_property
    def digest(self) -> str:
        return hashlib.sha256(self.data).hexdigest()[:16]

    def __str__(self) -> str:
        return self.data.decode("ascii")


def _refine(cells: Cells, nbrs: tuple[frozenset[int], ...]) -> Cells:
    """Refine to the coarsest stable partition.

    Worklist color refinement: cells split by neighbor counts into a
    splitter set, fragments are enqueued as further splitters.  Fragment
    order within a split is by count, which depends only on structure,
    never on the input labeling, so the final cell sequence is
    isomorphism-invariant.
    """
    cells = [sorted(c) for c in cells]
    work: deque[frozenset[int]] = deque(frozenset(c) for c in cells)
    while work:
        sset = work.popleft()
        new_cells: Cells = []
        for cell in cells:
            if len(cell) == 1:
                new_cells.append(cell)
                continue
            groups: dict[int, list[int]] = {}
            for v in cell:
                groups.setdefault(len(nbrs[v] & sset), []).append(v)
            if len(groups) == 1:
                new_cells.append(cell)
            else:
                fragments = [sorted(groups[k]) for k in sorted(groups)]
                new_cells.extend(fragments)
                work.extend(frozenset(f) for f in fragments)
        cells = new_cells
    return cells


def _cells_relate_trivially(cells: Cells, nbrs: tuple[frozenset[int], ...]) -> bool:
    """True when adjacency depends only on which cells two vertices lie in.

    For a stable partition this needs checking only between multi-vertex
    cells (singletons are uniform against everything by equitability):
    each such cell must induce an empty or complete subgraph, and each
    pair must be empty or complete bipartite.  Then every cell-respecting
    order encodes to the same bytes, so one leaf stands for the whole
    subtree.  Without this, highly symmetric graphs (edgeless, complete,
    complete multipartite) degenerate to n! leaves.
    """
    multi = [frozenset(c) for c in cells if len(c) > 1]
    for i, ci in enumerate(multi):
        u = next(iter(ci))
        if len(nbrs[u] & ci) not in (0, len(ci) - 1):
            return False
        for cj in multi[i + 1 :]:
            if len(nbrs[u] & cj) not in (0, len(cj)):
                return False
    return True


def _encode_under_order(g: Graph, order: list[int]) -> bytes:
    position = [0] * g.n
    for pos, v in enumerate(order):
        position[v] = pos
    relabeled = Graph(
        g.n,
        tuple(
            sorted(
                tuple(sorted((position[u], position[v])))
                for u, v in g.edges
            )
        ),
    )
    return encode_graph6(relabeled)


def canonical_form(g: Graph) -> CanonicalForm:
    """Compute the canonical form of ``g``."""
    if g.n == 0:
        return CanonicalForm(encode_graph6(g))
    nbrs = g.neighbor_sets
    best: bytes | None = None

    def descend(cells: Cells) -> None:
        nonlocal best
        cells = _refine(cells, nbrs)
        target = None
        for idx, cell in enumerate(cells):
            if len(cell) > 1 and (
                target is None or len(cell) < len(cells[target])
            ):
                target = idx
        if target is None or _cells_relate_trivially(cells, nbrs):
            order = [v for c in cells for v in c]
            candidate = _encode_under_order(g, order)
            if best is None or candidate < best:
                best = candidate
            return
        for v in cells[target]:
            rest = [w for w in cells[target] if w != v]
            descend(cells[:target] + [[v], rest] + cells[target + 1 :])

    descend([list(range(g.n))])
    assert best is not None
    return CanonicalForm(best)


def canonical_digest(g: Graph) -> str:
    return canonical_form(g).digest
