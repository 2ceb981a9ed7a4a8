"""Reference implementations the tests use as oracles.

Everything here is deliberately naive and shares no code with the
package: an oracle that reuses the implementation under test cannot
catch its bugs.  The graph6 encoder follows the published format
definition directly, the cycle finder enumerates vertex subsets, the
coloring check enumerates assignments, and the isomorphism test tries
every permutation.
"""

from __future__ import annotations

import itertools
import random

from steinberg import Graph, build_graph, canonical_digest


def graph6_reference(n: int, edges) -> bytes:
    """graph6 straight from the format definition, for n <= 62.

    Header byte 63+n, then the column-major upper triangle of the
    adjacency matrix packed six bits per byte, high bit first, padded
    with zeros, each byte offset by 63.
    """
    if not 0 <= n <= 62:
        raise ValueError("reference encoder handles n <= 62 only")
    present = {tuple(sorted(e)) for e in edges}
    bits = []
    for col in range(1, n):
        for row in range(col):
            bits.append(1 if (row, col) in present else 0)
    while len(bits) % 6:
        bits.append(0)
    out = [63 + n]
    for k in range(0, len(bits), 6):
        value = 0
        for b in bits[k : k + 6]:
            value = (value << 1) | b
        out.append(63 + value)
    return bytes(out)


def normalize_cycle(seq) -> tuple[int, ...]:
    """Canonical tuple for a cyclic sequence: smallest vertex first,
    then whichever direction gives the lexicographically smaller tuple."""
    k = len(seq)
    i = seq.index(min(seq))
    fwd = tuple(seq[(i + d) % k] for d in range(k))
    rev = tuple(seq[(i - d) % k] for d in range(k))
    return min(fwd, rev)


def subset_cycles(g: Graph, k: int) -> set[tuple[int, ...]]:
    """All k-cycles of g, by checking every subset and every ordering."""
    es = g.edge_set
    found = set()
    for sub in itertools.combinations(range(g.n), k):
        first = sub[0]
        for perm in itertools.permutations(sub[1:]):
            seq = (first,) + perm
            if all(
                tuple(sorted((seq[i], seq[(i + 1) % k]))) in es
                for i in range(k)
            ):
                found.add(normalize_cycle(seq))
    return found


def brute_isomorphic(g: Graph, h: Graph) -> bool:
    """Isomorphism by trying every vertex bijection (tiny graphs only)."""
    if g.n != h.n or g.m != h.m:
        return False
    if sorted(map(g.degree, range(g.n))) != sorted(map(h.degree, range(h.n))):
        return False
    hs = h.edge_set
    for perm in itertools.permutations(range(g.n)):
        if all(tuple(sorted((perm[u], perm[v]))) in hs for u, v in g.edges):
            return True
    return False


def product_3coloring_exists(g: Graph, fixed=None) -> bool:
    """SAT/UNSAT by enumerating every assignment, no pruning at all."""
    fixed = dict(fixed or {})
    free = [v for v in range(g.n) if v not in fixed]
    colors = dict(fixed)
    for combo in itertools.product(range(3), repeat=len(free)):
        colors.update(zip(free, combo))
        if all(colors[u] != colors[v] for u, v in g.edges):
            return True
    return False


def random_graph(rng: random.Random, n: int, p: float) -> Graph:
    edges = [
        (u, v) for u in range(n) for v in range(u + 1, n) if rng.random() < p
    ]
    return build_graph(n, edges)


def random_conflict_free_fixing(
    rng: random.Random, g: Graph, max_fixed: int | None = None
) -> dict[int, int]:
    """A random partial coloring that is proper on its own edges.

    Vertices are visited in random order; each picks a random color not
    used by an already-fixed neighbor, or is skipped if all three are
    taken, so the result never violates an edge by construction.
    """
    order = list(range(g.n))
    rng.shuffle(order)
    if max_fixed is None:
        max_fixed = rng.randrange(g.n + 1)
    fixing: dict[int, int] = {}
    for v in order[:max_fixed]:
        banned = {fixing[u] for u in g.neighbor_sets[v] if u in fixing}
        open_colors = [c for c in range(3) if c not in banned]
        if open_colors:
            fixing[v] = rng.choice(open_colors)
    return fixing


EXPECTED_CLASS_COUNTS = {1: 1, 2: 2, 3: 4, 4: 11, 5: 34, 6: 156, 7: 1044}


def iso_classes_upto(n_max: int) -> dict[int, list[Graph]]:
    """One representative per isomorphism class, for 1..n_max vertices.

    Built by vertex extension with canonical-form deduplication.  The
    per-size class counts are a published sequence, so callers assert
    them; a wrong count would expose a canonical form that merges or
    splits classes it should not.
    """
    levels: dict[int, list[Graph]] = {1: [build_graph(1, [])]}
    for n in range(2, n_max + 1):
        seen: dict[str, Graph] = {}
        for g in levels[n - 1]:
            for mask in range(1 << (n - 1)):
                extra = [(v, n - 1) for v in range(n - 1) if mask >> v & 1]
                h = build_graph(n, list(g.edges) + extra)
                seen.setdefault(canonical_digest(h), h)
        levels[n] = [seen[key] for key in sorted(seen)]
    return levels
