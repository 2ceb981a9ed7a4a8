import itertools

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from steinberg import (
    ImproperFixingError,
    OracleMismatchError,
    SizeGuardError,
    brute_force_3coloring,
    build_graph,
    check_fixed,
    exhaustive_color_count,
    forced_unequal,
    is_proper,
    revalidate_unsat,
    solve_3coloring,
    solve_3coloring_with_stats,
    terminal_behavior,
)
from steinberg.coloring import (
    all_equal_pattern,
    all_patterns,
    pattern_of,
    pattern_representative,
)
from steinberg.gadgets import InterfaceContract, TerminalGadget

from support import (
    product_3coloring_exists,
    random_conflict_free_fixing,
    random_graph,
)
import random


K4 = build_graph(4, [(i, j) for i in range(4) for j in range(i + 1, 4)])
C5 = build_graph(5, [(0, 1), (1, 2), (2, 3), (3, 4), (4, 0)])


def graphs(max_n: int = 8):
    @st.composite
    def build(draw):
        n = draw(st.integers(min_value=0, max_value=max_n))
        pairs = [(u, v) for u in range(n) for v in range(u + 1, n)]
        chosen = draw(st.sets(st.sampled_from(pairs)) if pairs else st.just(set()))
        return build_graph(n, sorted(chosen))

    return build()


# ---------------------------------------------------------------------------
# is_proper / check_fixed

def test_is_proper():
    tri = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert is_proper(tri, {0: 0, 1: 1, 2: 2})
    assert not is_proper(tri, {0: 0, 1: 0, 2: 1})


def test_is_proper_rejects_partial_or_out_of_range():
    tri = build_graph(3, [(0, 1)])
    with pytest.raises(ValueError):
        is_proper(tri, {0: 0, 1: 1})
    with pytest.raises(ValueError):
        is_proper(tri, {0: 0, 1: 1, 2: 5})


def test_check_fixed():
    g = build_graph(3, [(0, 1)])
    check_fixed(g, {0: 0, 1: 1})
    with pytest.raises(ImproperFixingError):
        check_fixed(g, {0: 0, 1: 0})
    with pytest.raises(ImproperFixingError):
        check_fixed(g, {5: 0})
    with pytest.raises(ImproperFixingError):
        check_fixed(g, {0: 3})


# ---------------------------------------------------------------------------
# the solver

def test_c5_witness_is_the_documented_one():
    # fixed branching order makes this exact, not just some proper coloring
    assert solve_3coloring(C5) == {0: 0, 1: 1, 2: 0, 3: 1, 4: 2}


def test_k4_unsat():
    assert solve_3coloring(K4) is None


def test_empty_graph_sat():
    assert solve_3coloring(build_graph(0, [])) == {}


def test_improper_fixing_is_an_error_not_unsat():
    g = build_graph(2, [(0, 1)])
    with pytest.raises(ImproperFixingError):
        solve_3coloring(g, {0: 1, 1: 1})


def test_solution_extends_fixing():
    g = build_graph(4, [(0, 1), (1, 2), (2, 3)])
    got = solve_3coloring(g, {0: 2, 3: 1})
    assert got is not None and got[0] == 2 and got[3] == 1
    assert is_proper(g, got)


def test_stats_count_nodes():
    _, stats = solve_3coloring_with_stats(K4)
    assert stats.nodes >= 0
    sol, _ = solve_3coloring_with_stats(C5)
    assert sol is not None


def test_parallel_verdict_matches_sequential():
    for g in (K4, C5, build_graph(6, [(i, (i + 1) % 6) for i in range(6)])):
        seq = solve_3coloring(g)
        par = solve_3coloring(g, jobs=2)
        assert (seq is None) == (par is None)
        if par is not None:
            assert is_proper(g, par)


@given(graphs(6))
@settings(max_examples=150, deadline=None)
def test_solver_agrees_with_plain_enumeration(g):
    assert (solve_3coloring(g) is not None) == product_3coloring_exists(g)


@given(graphs(7), st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=100, deadline=None)
def test_solver_agrees_with_brute_force_under_fixings(g, seed):
    fixing = random_conflict_free_fixing(random.Random(seed), g)
    a = solve_3coloring(g, fixing)
    b = brute_force_3coloring(g, fixing)
    assert (a is None) == (b is None)
    if a is not None:
        assert is_proper(g, a)
        assert all(a[v] == c for v, c in fixing.items())


@given(graphs(7), st.permutations([0, 1, 2]))
@settings(max_examples=100, deadline=None)
def test_color_permutation_never_flips_the_verdict(g, perm):
    fixing = {v: v % 3 for v in range(min(g.n, 3))}
    try:
        check_fixed(g, fixing)
    except ImproperFixingError:
        fixing = {}
    permuted = {v: perm[c] for v, c in fixing.items()}
    assert (solve_3coloring(g, fixing) is None) == (
        solve_3coloring(g, permuted) is None
    )


# ---------------------------------------------------------------------------
# brute force and the exhaustive sweep

def test_brute_force_returns_lexicographically_first():
    p3 = build_graph(3, [(0, 1), (1, 2)])
    assert brute_force_3coloring(p3, {0: 0, 2: 0}) == {0: 0, 1: 1, 2: 0}
    # free vertices scanned in index order, colors in 0..2
    assert brute_force_3coloring(p3) == {0: 0, 1: 1, 2: 0}


def test_brute_force_unsat_and_guard():
    assert brute_force_3coloring(K4) is None
    big = build_graph(26, [])
    with pytest.raises(SizeGuardError):
        brute_force_3coloring(big)
    # fixing counts against the free-vertex budget
    assert brute_force_3coloring(big, {v: 0 for v in range(10)}) is not None


def test_exhaustive_color_count():
    tri = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    assert exhaustive_color_count(tri) == 6
    assert exhaustive_color_count(tri, {0: 0}) == 2
    assert exhaustive_color_count(K4) == 0
    assert exhaustive_color_count(build_graph(2, [])) == 9
    with pytest.raises(SizeGuardError):
        exhaustive_color_count(build_graph(17, []))


@given(graphs(6))
@settings(max_examples=100, deadline=None)
def test_count_positive_iff_solver_sat(g):
    assert (exhaustive_color_count(g) > 0) == (solve_3coloring(g) is not None)


# ---------------------------------------------------------------------------
# terminal patterns

def test_pattern_of_normalizes_by_first_occurrence():
    assert pattern_of([2, 2, 0]) == "001"
    assert pattern_of([1, 0, 2]) == "012"
    assert pattern_of([0, 0, 0]) == "000"
    assert all_equal_pattern(3) == "000"


def test_all_patterns_arity_three():
    assert all_patterns(3) == ["000", "001", "010", "011", "012"]


def test_pattern_representative_round_trips():
    for t in (2, 3, 4):
        for p in all_patterns(t):
            assert pattern_of(pattern_representative(p)) == p


@given(graphs(6), st.integers(min_value=0, max_value=2**31 - 1))
@settings(max_examples=60, deadline=None)
def test_pattern_counts_partition_all_colorings(g, seed):
    # the pattern classes of three chosen vertices partition the space of
    # proper colorings, so the weighted representative counts add up
    if g.n < 3:
        return
    rng = random.Random(seed)
    terms = rng.sample(range(g.n), 3)
    total = exhaustive_color_count(g)
    weighted = 0
    for p in all_patterns(3):
        rep = pattern_representative(p)
        distinct = len({tuple(perm[c] for c in rep) for perm in itertools.permutations(range(3))})
        try:
            check_fixed(g, dict(zip(terms, rep)))
        except ImproperFixingError:
            continue
        weighted += distinct * exhaustive_color_count(g, dict(zip(terms, rep)))
    assert weighted == total


# ---------------------------------------------------------------------------
# terminal behavior

def _bare_gadget(g, terminals):
    return TerminalGadget(g, terminals, InterfaceContract())


def test_triangle_terminals_admit_only_all_distinct():
    tri = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    behavior = terminal_behavior(_bare_gadget(tri, (0, 1, 2)))
    assert dict(behavior.entries) == {
        "000": False,
        "001": False,
        "010": False,
        "011": False,
        "012": True,
    }


def test_edgeless_gadget_is_not_forced_unequal():
    g = build_graph(3, [])
    assert not forced_unequal(_bare_gadget(g, (0, 1, 2)))


def test_seed_gadget_behavior_table(seed_gadget):
    behavior = terminal_behavior(seed_gadget)
    table = dict(behavior.entries)
    assert table["000"] is False
    assert all(table[p] for p in ("001", "010", "011", "012"))
    assert forced_unequal(seed_gadget)


# ---------------------------------------------------------------------------
# UNSAT revalidation

def test_revalidate_unsat_on_k4():
    split = revalidate_unsat(K4)
    assert split["root"] == 0
    assert [b["color"] for b in split["branches"]] == [0, 1, 2]
    assert all(b["verdict"] == "unsat" for b in split["branches"])


def test_revalidate_unsat_conflict_branches():
    # every color for the one free vertex collides with a fixed neighbor
    fixing = {1: 0, 2: 1, 3: 2}
    split = revalidate_unsat(K4, fixing)
    assert all(b["verdict"] == "conflict" for b in split["branches"])


def test_revalidate_unsat_rejects_satisfiable_input():
    with pytest.raises(OracleMismatchError):
        revalidate_unsat(C5)
    tri = build_graph(3, [(0, 1), (1, 2), (0, 2)])
    with pytest.raises(OracleMismatchError):
        revalidate_unsat(tri, {0: 0, 1: 1, 2: 2})
