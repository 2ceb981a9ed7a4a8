"""Terminal gadgets, interface contracts, and the paste calculus.

A gadget is a graph with distinguished terminals and a contract stating
what the graph promises: forbidden short cycles, terminal distances,
infeasible terminal color patterns, planarity.  Gadgets compose by
pasting: terminals of several parts are identified through named slots,
fresh vertices and extra edges are added on top, and every structural
collision (two vertices of one part on one slot, duplicated edges) is an
error rather than a silent merge.

The two stock recipes here build, from a verified seed gadget, the
three-copy composite gadget and then the final counterexample graph.
"""

from __future__ import annotations

import json
import time
from dataclasses import dataclass
from pathlib import Path
from typing import Any

from .analysis import (
    distance,
    forbidden_cycle_check,
    is_planar,
    shortest_path,
    validate_planarity_certificate,
)
from .canon import canonical_digest
from .coloring import (
    ImproperFixingError,
    TerminalBehavior,
    all_equal_pattern,
    brute_force_3coloring,
    is_proper,
    pattern_of,
    pattern_representative,
    revalidate_unsat,
    solve_3coloring_with_stats,
)
from .errors import ContractError, FormatError, OracleMismatchError, PasteError
from .formats import graph_from_json_dict, graph_to_json_dict, parse_json_payload
from .graphs import Graph, add_apex, build_graph
from .report import CheckResult, VerificationReport, witness_json

_ORACLE_FREE_LIMIT = 25  # past this, UNSAT is revalidated by symmetry split


# ---------------------------------------------------------------------------
# contracts and gadgets

Matrix = tuple[tuple[int, ...], ...]


def _check_matrix(mat: Matrix, what: str) -> None:
    t = len(mat)
    for row in mat:
        if len(row) != t:
            raise ValueError(f"{what} must be square")
    for i in range(t):
        if mat[i][i] != 0:
            raise ValueError(f"{what} must have a zero diagonal")
        for j in range(t):
            if mat[i][j] != mat[j][i]:
                raise ValueError(f"{what} must be symmetric")
            if mat[i][j] < 0:
                raise ValueError(f"{what} entries must be >= 0")


@dataclass(frozen=True)
class InterfaceContract:
    """What a gadget promises at its interface.

    Exact distances, when present, dominate the minimum distances: both
    are checked but exact implies the minimum clause.
    """

    forbidden_cycle_lengths: frozenset[int] = frozenset()
    min_terminal_distances: Matrix | None = None
    exact_terminal_distances: Matrix | None = None
    forbidden_patterns: frozenset[str] = frozenset()
    require_planar: bool = True
    verified: bool = False

    def __post_init__(self) -> None:
        for k in self.forbidden_cycle_lengths:
            if not (3 <= k <= 6):
                raise ValueError(f"forbidden cycle length {k} outside 3..6")
        arities = set()
        if self.min_terminal_distances is not None:
            _check_matrix(self.min_terminal_distances, "min distances")
            arities.add(len(self.min_terminal_distances))
        if self.exact_terminal_distances is not None:
            _check_matrix(self.exact_terminal_distances, "exact distances")
            arities.add(len(self.exact_terminal_distances))
        if (
            self.min_terminal_distances is not None
            and self.exact_terminal_distances is not None
        ):
            t = len(self.min_terminal_distances)
            for i in range(t):
                for j in range(t):
                    if (
                        self.exact_terminal_distances[i][j]
                        < self.min_terminal_distances[i][j]
                    ):
                        raise ValueError(
                            "exact distances must dominate min distances"
                        )
        for p in self.forbidden_patterns:
            if pattern_of([int(ch) for ch in p]) != p:
                raise ValueError(f"forbidden pattern {p!r} is not normalized")
            arities.add(len(p))
        if len(arities) > 1:
            raise ValueError(f"contract clauses disagree on arity: {arities}")

    @property
    def arity(self) -> int | None:
        if self.exact_terminal_distances is not None:
            return len(self.exact_terminal_distances)
        if self.min_terminal_distances is not None:
            return len(self.min_terminal_distances)
        for p in self.forbidden_patterns:
            return len(p)
        return None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "forbidden_cycle_lengths": sorted(self.forbidden_cycle_lengths),
            "min_terminal_distances": (
                [list(r) for r in self.min_terminal_distances]
                if self.min_terminal_distances
                else None
            ),
            "exact_terminal_distances": (
                [list(r) for r in self.exact_terminal_distances]
                if self.exact_terminal_distances
                else None
            ),
            "forbidden_patterns": sorted(self.forbidden_patterns),
            "require_planar": self.require_planar,
            "verified": self.verified,
        }

    @classmethod
    def from_json_dict(cls, d: dict[str, Any]) -> "InterfaceContract":
        def mat(key: str) -> Matrix | None:
            raw = d.get(key)
            if raw is None:
                return None
            return tuple(tuple(int(x) for x in row) for row in raw)

        return cls(
            forbidden_cycle_lengths=frozenset(
                int(k) for k in d.get("forbidden_cycle_lengths", ())
            ),
            min_terminal_distances=mat("min_terminal_distances"),
            exact_terminal_distances=mat("exact_terminal_distances"),
            forbidden_patterns=frozenset(
                str(p) for p in d.get("forbidden_patterns", ())
            ),
            require_planar=bool(d.get("require_planar", True)),
            verified=bool(d.get("verified", False)),
        )


@dataclass(frozen=True)
class TerminalGadget:
    graph: Graph
    terminals: tuple[int, ...]
    contract: InterfaceContract

    def __post_init__(self) -> None:
        if len(set(self.terminals)) != len(self.terminals):
            raise ValueError("terminals must be distinct")
        for t in self.terminals:
            if not (0 <= t < self.graph.n):
                raise ValueError(f"terminal {t} outside 0..{self.graph.n - 1}")
        arity = self.contract.arity
        if arity is not None and arity != len(self.terminals):
            raise ValueError(
                f"contract arity {arity} != {len(self.terminals)} terminals"
            )


def seed_contract() -> InterfaceContract:
    """Contract of the seed gadget: terminals (a, b, c) with d(a,b) =
    d(a,c) = 3 and d(b,c) = 4, no 4- or 5-cycles, the all-equal terminal
    pattern infeasible, planar."""
    return InterfaceContract(
        forbidden_cycle_lengths=frozenset({4, 5}),
        exact_terminal_distances=((0, 3, 3), (3, 0, 4), (3, 4, 0)),
        forbidden_patterns=frozenset({all_equal_pattern(3)}),
        require_planar=True,
    )


def triple_contract() -> InterfaceContract:
    """Contract of the three-copy composite: all terminal distances 4,
    no 4- or 5-cycles, all-equal infeasible, planar."""
    return InterfaceContract(
        forbidden_cycle_lengths=frozenset({4, 5}),
        exact_terminal_distances=((0, 4, 4), (4, 0, 4), (4, 4, 0)),
        forbidden_patterns=frozenset({all_equal_pattern(3)}),
        require_planar=True,
    )


# ---------------------------------------------------------------------------
# verification

def _check_pattern_infeasible(
    g: Graph, terminals: tuple[int, ...], pattern: str, jobs: int = 1
) -> tuple[bool, Any, dict[str, Any]]:
    """Solver verdict plus independent revalidation for one pattern.

    Below the brute-force guard the oracle re-decides the query and any
    disagreement with the solver raises :class:`OracleMismatchError`.
    Above it, an UNSAT answer is re-validated by a symmetry split: the
    smallest free vertex is pinned to each of the three colors in turn.
    """
    rep = pattern_representative(pattern)
    fixing = {terminals[i]: rep[i] for i in range(len(terminals))}
    try:
        solution, stats = solve_3coloring_with_stats(g, fixing, jobs=jobs)
    except ImproperFixingError:
        # two equal terminals are adjacent: the pattern cannot occur
        return True, None, {"mode": "adjacent-terminals"}
    details: dict[str, Any] = {"solver_nodes": stats.nodes}
    if solution is not None:
        assert is_proper(g, solution)
        witness = {"coloring": {str(v): c for v, c in sorted(solution.items())}}
        return False, witness, details
    free = g.n - len(fixing)
    if free <= _ORACLE_FREE_LIMIT:
        oracle = brute_force_3coloring(g, fixing)
        if oracle is not None:
            raise OracleMismatchError(
                f"pattern {pattern}: solver says UNSAT, brute force found"
                f" {oracle!r} on a {g.n}-vertex graph with fixing {fixing!r}"
            )
        details["mode"] = "brute-force-oracle"
    else:
        details["mode"] = "symmetry-split"
        details["split"] = revalidate_unsat(g, fixing, jobs=jobs)
    return True, None, details


def verify_contract(gadget: TerminalGadget, jobs: int = 1) -> VerificationReport:
    """Re-check every contract clause; one report line per clause."""
    g = gadget.graph
    contract = gadget.contract
    checks: list[CheckResult] = []

    def timed(name: str, fn) -> None:
        t0 = time.perf_counter()
        passed, witness, details = fn()
        checks.append(
            CheckResult(
                name=name,
                passed=passed,
                witness=witness_json(witness),
                details=details,
                duration_s=time.perf_counter() - t0,
            )
        )

    if contract.forbidden_cycle_lengths:

        def cycle_clause():
            hit = forbidden_cycle_check(g, contract.forbidden_cycle_lengths)
            return hit is None, hit, None

        timed("forbidden-cycles", cycle_clause)

    exact = contract.exact_terminal_distances
    minimum = contract.min_terminal_distances
    t = len(gadget.terminals)
    for i in range(t):
        for j in range(i + 1, t):
            want_exact = exact[i][j] if exact else None
            want_min = minimum[i][j] if minimum else None
            if want_exact is None and want_min is None:
                continue

            def distance_clause(i=i, j=j, want_exact=want_exact, want_min=want_min):
                u, v = gadget.terminals[i], gadget.terminals[j]
                d = distance(g, u, v)
                ok = d is not None
                if ok and want_exact is not None:
                    ok = d == want_exact
                if ok and want_min is not None:
                    ok = d >= want_min
                witness = None
                if not ok:
                    witness = {
                        "distance": d,
                        "path": shortest_path(g, u, v),
                        "expected_exact": want_exact,
                        "expected_min": want_min,
                    }
                return ok, witness, {"distance": d}

            timed(f"distance-t{i}-t{j}", distance_clause)

    for pattern in sorted(contract.forbidden_patterns):

        def pattern_clause(pattern=pattern):
            return _check_pattern_infeasible(
                g, gadget.terminals, pattern, jobs=jobs
            )

        timed(f"pattern-{pattern}-infeasible", pattern_clause)

    if contract.require_planar:

        def planar_clause():
            cert = is_planar(g)
            validate_planarity_certificate(g, cert)
            if cert.planar:
                return True, None, {"faces": "euler-checked"}
            return False, cert, None

        timed("planarity", planar_clause)

    target = {"n": g.n, "m": g.m, "canonical_digest": canonical_digest(g)}
    return VerificationReport(target=target, checks=tuple(checks))


def require_contract(gadget: TerminalGadget, jobs: int = 1) -> VerificationReport:
    """verify_contract, raising :class:`ContractError` on the first
    failing clause."""
    report = verify_contract(gadget, jobs=jobs)
    if not report.passed:
        bad = next(c for c in report.checks if not c.passed)
        raise ContractError(
            f"contract clause {bad.name} failed: {bad.witness}", clause=bad.name
        )
    return report


def terminals_cofacial(gadget: TerminalGadget) -> bool:
    """Can the terminals lie on one face?  Tested by joining a fresh apex
    vertex to all of them: planarity survives exactly when they can."""
    apexed = add_apex(gadget.graph, gadget.terminals)
    cert = is_planar(apexed)
    validate_planarity_certificate(apexed, cert)
    return cert.planar


# ---------------------------------------------------------------------------
# paste calculus

@dataclass(frozen=True)
class PastePart:
    """One part of a recipe: ``slots[i]`` receives terminal i."""

    gadget: TerminalGadget
    slots: tuple[int, ...]


@dataclass(frozen=True)
class PasteRecipe:
    """A reproducible build script over a shared slot space.

    Slots 0..num_slots-1 are identification points; extra vertices get
    ids num_slots..num_slots+extra_vertices-1; extra edges live on those
    ids.
    """

    num_slots: int
    parts: tuple[PastePart, ...]
    extra_vertices: int = 0
    extra_edges: tuple[tuple[int, int], ...] = ()
    labels: tuple[tuple[int, str], ...] | None = None


@dataclass(frozen=True)
class PasteResult:
    graph: Graph
    slot_vertices: tuple[int, ...]
    fresh_vertices: tuple[int, ...]
    part_maps: tuple[dict[int, int], ...]


def paste(recipe: PasteRecipe) -> PasteResult:
    """Execute a recipe.

    Vertex numbering is deterministic: slots first, then extra vertices,
    then each part's interior in part order.  Any two edges landing on
    the same final pair is a collision error, whether they come from two
    parts, from one part and an extra edge, or from two extra edges.
    """
    s = recipe.num_slots
    f = recipe.extra_vertices
    if s < 0 or f < 0:
        raise PasteError("slot and extra-vertex counts must be >= 0")
    used_slots: set[int] = set()
    for pi, part in enumerate(recipe.parts):
        terms = part.gadget.terminals
        if len(part.slots) != len(terms):
            raise PasteError(
                f"part {pi} assigns {len(part.slots)} slots to"
                f" {len(terms)} terminals"
            )
        if len(set(part.slots)) != len(part.slots):
            raise PasteError(
                f"part {pi} would identify two of its own vertices"
            )
        for slot in part.slots:
            if not (0 <= slot < s):
                raise PasteError(f"part {pi} references unknown slot {slot}")
            used_slots.add(slot)
    for slot in range(s):
        if slot not in used_slots:
            raise PasteError(f"dangling slot {slot}: no part is pasted to it")
    union = s + f
    for u, v in recipe.extra_edges:
        if not (0 <= u < union) or not (0 <= v < union):
            raise PasteError(f"extra edge ({u}, {v}) outside the union space")
        if u == v:
            raise PasteError(f"extra edge ({u}, {v}) is a loop")

    next_vertex = s + f
    part_maps: list[dict[int, int]] = []
    for part in recipe.parts:
        gmap: dict[int, int] = {}
        for pos, term in enumerate(part.gadget.terminals):
            gmap[term] = part.slots[pos]
        for v in range(part.gadget.graph.n):
            if v not in gmap:
                gmap[v] = next_vertex
                next_vertex += 1
        part_maps.append(gmap)

    edges: dict[tuple[int, int], str] = {}

    def put(u: int, v: int, origin: str) -> None:
        e = (u, v) if u < v else (v, u)
        if e in edges:
            raise PasteError(
                f"edge collision on {e}: {edges[e]} vs {origin}"
            )
        edges[e] = origin

    for pi, (part, gmap) in enumerate(zip(recipe.parts, part_maps)):
        for u, v in part.gadget.graph.edges:
            put(gmap[u], gmap[v], f"part {pi}")
    for u, v in recipe.extra_edges:
        put(u, v, "extra edge")

    labels = dict(recipe.labels) if recipe.labels else None
    graph = build_graph(next_vertex, sorted(edges), labels)
    return PasteResult(
        graph=graph,
        slot_vertices=tuple(range(s)),
        fresh_vertices=tuple(range(s, s + f)),
        part_maps=tuple(part_maps),
    )


# ---------------------------------------------------------------------------
# the two stock compositions

def _seed_roles(seed: TerminalGadget) -> tuple[int, int, int]:
    """Order the seed terminals as (a, b, c): the pair at distance 4 is
    (b, c) and the remaining terminal is a."""
    t = seed.terminals
    if len(t) != 3:
        raise ContractError(
            f"seed gadget needs 3 terminals, got {len(t)}", clause="arity"
        )
    dists = {
        (i, j): distance(seed.graph, t[i], t[j])
        for i in range(3)
        for j in range(i + 1, 3)
    }
    far = [(i, j) for (i, j), d in dists.items() if d == 4]
    near = [(i, j) for (i, j), d in dists.items() if d == 3]
    if len(far) != 1 or len(near) != 2:
        raise ContractError(
            f"terminal distances {dists} do not match one 4-pair and two"
            " 3-pairs",
            clause="distance",
        )
    b_pos, c_pos = far[0]
    a_pos = ({0, 1, 2} - {b_pos, c_pos}).pop()
    return t[a_pos], t[b_pos], t[c_pos]


def triple_recipe(seed: TerminalGadget) -> PasteRecipe:
    """Three seed copies around a shared triangle.

    Slots: 0, 1, 2 are the new terminals; 3, 4, 5 ("d", "e", "f") take
    the three a-role terminals and carry the extra triangle.  Copy X
    spans slots (0, 1), copy Y (1, 2), copy Z (2, 0) with its distance-4
    pair, so every new terminal pair is bridged by exactly one copy.
    """
    a, b, c = _seed_roles(seed)
    oriented = TerminalGadget(seed.graph, (a, b, c), seed_contract())
    pos = {v: i for i, v in enumerate(oriented.terminals)}

    def part(a_slot: int, b_slot: int, c_slot: int) -> PastePart:
        slots = [0, 0, 0]
        slots[pos[a]] = a_slot
        slots[pos[b]] = b_slot
        slots[pos[c]] = c_slot
        return PastePart(oriented, tuple(slots))

    return PasteRecipe(
        num_slots=6,
        parts=(part(3, 0, 1), part(4, 1, 2), part(5, 2, 0)),
        extra_vertices=0,
        extra_edges=((3, 4), (4, 5), (3, 5)),
        labels=((0, "a"), (1, "b"), (2, "c"), (3, "d"), (4, "e"), (5, "f")),
    )


def build_triple_gadget(seed: TerminalGadget, jobs: int = 1) -> TerminalGadget:
    """Paste three verified seed copies into the composite gadget.

    The seed is re-verified against its full contract first; any failing
    clause rejects the build.
    """
    a, b, c = _seed_roles(seed)
    require_contract(
        TerminalGadget(seed.graph, (a, b, c), seed_contract()), jobs=jobs
    )
    result = paste(triple_recipe(seed))
    return TerminalGadget(result.graph, (0, 1, 2), triple_contract())


# final assembly slot ids
_A, _C, _CP, _D, _F, _DP, _FP = range(7)
_B, _E, _EP = 7, 8, 9

_FINAL_LABELS = (
    (_A, "a"),
    (_C, "c"),
    (_CP, "c'"),
    (_D, "d"),
    (_F, "f"),
    (_DP, "d'"),
    (_FP, "f'"),
    (_B, "b"),
    (_E, "e"),
    (_EP, "e'"),
)

_FINAL_EXTRA_EDGES = (
    (_A, _B),
    (_B, _C),
    (_B, _CP),
    (_C, _CP),
    (_A, _E),
    (_D, _E),
    (_E, _F),
    (_D, _F),
    (_A, _EP),
    (_DP, _EP),
    (_EP, _FP),
    (_DP, _FP),
)


def counterexample_recipe(triple: TerminalGadget) -> PasteRecipe:
    """Four composite copies sharing a hub vertex.

    Copies P and Q meet in slots (a, c), copies R and S in (a, c');
    their third terminals become d, f, d', f'.  Fresh vertices b, e, e'
    close the three extra triangles b-c-c', d-e-f, d'-e'-f', and a is
    joined to b, e, e'.
    """
    return PasteRecipe(
        num_slots=7,
        parts=(
            PastePart(triple, (_A, _C, _D)),
            PastePart(triple, (_A, _C, _F)),
            PastePart(triple, (_A, _CP, _DP)),
            PastePart(triple, (_A, _CP, _FP)),
        ),
        extra_vertices=3,
        extra_edges=_FINAL_EXTRA_EDGES,
        labels=_FINAL_LABELS,
    )


def build_counterexample(triple: TerminalGadget, jobs: int = 1) -> Graph:
    """Assemble the final graph from a verified composite gadget."""
    require_contract(
        TerminalGadget(triple.graph, triple.terminals, triple_contract()),
        jobs=jobs,
    )
    result = paste(counterexample_recipe(triple))
    g = result.graph
    # Renumber so each copy's hub triangle (composite vertices 3, 4, 5)
    # directly follows the ten named vertices.  The solver breaks
    # minimum-domain ties by smallest index, so the vertices that many
    # copies constrain must come first; otherwise a refutation inside a
    # later copy is rediscovered under every assignment of an earlier
    # copy's interior.
    front = list(range(10))
    for pm in result.part_maps:
        front.extend(pm[v] for v in (3, 4, 5))
    in_front = set(front)
    order = front + [v for v in range(g.n) if v not in in_front]
    return g.relabeled({old: new for new, old in enumerate(order)})


# ---------------------------------------------------------------------------
# solver-free compositional argument

_FINAL_NAMES = ("a", "b", "c", "c'", "d", "e", "f", "d'", "e'", "f'")

_FINAL_NAME_EDGES = (
    ("a", "b"),
    ("b", "c"),
    ("b", "c'"),
    ("c", "c'"),
    ("a", "e"),
    ("d", "e"),
    ("e", "f"),
    ("d", "f"),
    ("a", "e'"),
    ("d'", "e'"),
    ("e'", "f'"),
    ("d'", "f'"),
)

_FINAL_COPY_TRIPLES = (
    ("a", "c", "d"),
    ("a", "c", "f"),
    ("a", "c'", "d'"),
    ("a", "c'", "f'"),
)


@dataclass(frozen=True)
class CompositionalResult:
    """Outcome of the composition-level non-colorability argument."""

    ok: bool
    triple_stage: dict[str, Any]
    final_stage: dict[str, Any] | None
    counterexample: dict[str, int] | None

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "ok": self.ok,
            "triple_stage": self.triple_stage,
            "final_stage": self.final_stage,
            "counterexample": self.counterexample,
        }


def _close_tree(
    names: tuple[str, ...],
    assign: dict[str, int],
    order: int,
    edges: tuple[tuple[str, str], ...],
    mono_triples: tuple[tuple[str, ...], ...],
    counts: dict[str, int],
) -> tuple[dict[str, Any], dict[str, int] | None]:
    """DFS over colorings of ``names``; a branch closes on a
    monochromatic edge or a fully-monochromatic triple.  Returns the case
    tree and the first surviving assignment, if any."""
    for x, y in edges:
        if x in assign and y in assign and assign[x] == assign[y]:
            reason = f"edge {x}-{y} monochromatic"
            counts[reason] = counts.get(reason, 0) + 1
            return {"closed": reason}, None
    for triple in mono_triples:
        if all(v in assign for v in triple) and (
            len({assign[v] for v in triple}) == 1
        ):
            reason = f"copy ({', '.join(triple)}) monochromatic"
            counts[reason] = counts.get(reason, 0) + 1
            return {"closed": reason}, None
    if order == len(names):
        counts["open branch"] = counts.get("open branch", 0) + 1
        return {"survivor": True}, dict(assign)
    v = names[order]
    cases: dict[str, Any] = {}
    survivor = None
    for color in (0, 1, 2):
        assign[v] = color
        subtree, found = _close_tree(
            names, assign, order + 1, edges, mono_triples, counts
        )
        del assign[v]
        cases[str(color)] = subtree
        if found is not None and survivor is None:
            survivor = found
    return {"vertex": v, "cases": cases}, survivor


def compositional_check(seed_behavior: TerminalBehavior) -> CompositionalResult:
    """Prove the final graph non-3-colorable from the seed behavior
    table alone, without running the solver on the big graph.

    Stage one re-derives the composite gadget's interface fact: no
    proper coloring makes its three terminals equal.  Every coloring of
    the shared color and the triangle d e f must die on a triangle edge
    or on a seed copy whose terminal pattern the table marks infeasible.

    Stage two enumerates colorings of the ten interface vertices of the
    final assembly and closes every branch using only the extra edges
    and the stage-one fact.  A surviving branch in either stage is
    returned as a counter-witness.
    """
    if seed_behavior.arity != 3:
        raise ValueError("seed behavior table must cover 3 terminals")

    # stage one: three seed copies spanning terminal pairs (A,B), (B,C),
    # (C,A), their a-roles on the triangle d e f, all terminals equal
    counts1: dict[str, int] = {}
    survivor1: dict[str, int] | None = None
    cases1 = 0
    tri_edges = (("d", "e"), ("e", "f"), ("d", "f"))
    for shared in (0, 1, 2):
        for d in (0, 1, 2):
            for e in (0, 1, 2):
                for f in (0, 1, 2):
                    cases1 += 1
                    assign = {"d": d, "e": e, "f": f}
                    closed = None
                    for x, y in tri_edges:
                        if assign[x] == assign[y]:
                            closed = f"edge {x}-{y} monochromatic"
                            break
                    if closed is None:
                        for slot_name in ("d", "e", "f"):
                            pat = pattern_of((assign[slot_name], shared, shared))
                            if not seed_behavior.feasible(pat):
                                closed = (
                                    f"seed copy at {slot_name} needs"
                                    f" infeasible pattern {pat}"
                                )
                                break
                    if closed is None:
                        if survivor1 is None:
                            survivor1 = {"shared": shared, **assign}
                        counts1["open branch"] = counts1.get("open branch", 0) + 1
                    else:
                        counts1[closed] = counts1.get(closed, 0) + 1
    triple_stage = {
        "cases": cases1,
        "closed_by": dict(sorted(counts1.items())),
        "survivor": survivor1,
    }
    if survivor1 is not None:
        return CompositionalResult(
            ok=False,
            triple_stage=triple_stage,
            final_stage=None,
            counterexample=survivor1,
        )

    # stage two: the ten interface vertices of the final assembly; the
    # hub is pinned to color 0, which is no loss because permuting
    # colors preserves properness
    counts2: dict[str, int] = {}
    tree, survivor2 = _close_tree(
        _FINAL_NAMES,
        {"a": 0},
        1,
        _FINAL_NAME_EDGES,
        _FINAL_COPY_TRIPLES,
        counts2,
    )
    final_stage = {
        "assumed": {"a": 0},
        "closed_by": dict(sorted(counts2.items())),
        "tree": tree,
    }
    return CompositionalResult(
        ok=survivor2 is None,
        triple_stage=triple_stage,
        final_stage=final_stage,
        counterexample=survivor2,
    )


# ---------------------------------------------------------------------------
# gadget serialization

def gadget_to_json_dict(gadget: TerminalGadget) -> dict[str, Any]:
    d = graph_to_json_dict(gadget.graph)
    d["terminals"] = list(gadget.terminals)
    d["contract"] = gadget.contract.to_json_dict()
    return d


def gadget_from_json_dict(d: dict[str, Any]) -> TerminalGadget:
    graph = graph_from_json_dict(d)
    if "terminals" not in d:
        raise FormatError("gadget JSON needs a 'terminals' list")
    terminals = tuple(int(t) for t in d["terminals"])
    contract = InterfaceContract.from_json_dict(d.get("contract", {}))
    return TerminalGadget(graph, terminals, contract)


def save_gadget(
    gadget: TerminalGadget,
    path: str | Path,
    verification: dict[str, Any] | None = None,
) -> None:
    d = gadget_to_json_dict(gadget)
    if verification is not None:
        d["verification"] = verification
    text = json.dumps(d, indent=2, sort_keys=True)
    Path(path).write_bytes((text + "\n").encode("ascii"))


def load_gadget(path: str | Path) -> TerminalGadget:
    return gadget_from_json_dict(parse_json_payload(Path(path).read_bytes()))


def load_gadget_payload(path: str | Path) -> dict[str, Any]:
    return parse_json_payload(Path(path).read_bytes())
