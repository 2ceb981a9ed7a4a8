import pytest

from steinberg import build_counterexample, build_triple_gadget, load_seed_gadget

from support import EXPECTED_CLASS_COUNTS, iso_classes_upto


@pytest.fixture(scope="session")
def seed_gadget():
    return load_seed_gadget()


@pytest.fixture(scope="session")
def triple_gadget(seed_gadget):
    return build_triple_gadget(seed_gadget)


@pytest.fixture(scope="session")
def final_graph(triple_gadget):
    return build_counterexample(triple_gadget)


@pytest.fixture(scope="session")
def small_graph_pool():
    """Every graph on 1..7 vertices, one per isomorphism class.

    Asserting the published class counts here cross-checks the canonical
    form used for deduplication before any test trusts the pool.
    """
    levels = iso_classes_upto(7)
    assert {n: len(gs) for n, gs in levels.items()} == EXPECTED_CLASS_COUNTS
    return levels
