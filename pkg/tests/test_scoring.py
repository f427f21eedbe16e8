import random

import pytest
from hypothesis import given, strategies as st

from trailfinder.graph import build_from_records
from trailfinder.graph import build_content_classes
from trailfinder.scoring import (
    geometric_sum,
    score_discounted,
    score_sum_distinct,
    score_weighted,
)

from conftest import records_from_edges

# Page scores recovered from the published example tree: the root page
# scores 1.8076 and the discount factor solves to 0.75 from the first two
# table rows (see test_acceptance for the full derivation).
MU_ROOT = 1.8076
MU_TIP3 = 6.264
MU_TIP9 = 1.9349
GAMMA = 0.75


def test_geometric_sum_small():
    assert geometric_sum(0.5, 0, 2) == pytest.approx(1.75)


def test_geometric_sum_single_term():
    for a in (0.0, 0.3, 0.99):
        for x in (0, 1, 5):
            assert geometric_sum(a, x, x) == pytest.approx(a**x)


def test_geometric_sum_limit_a_one():
    assert geometric_sum(1.0, 2, 7) == 6.0


def test_geometric_sum_rejects_bad_args():
    with pytest.raises(ValueError):
        geometric_sum(-0.1, 0, 1)
    with pytest.raises(ValueError):
        geometric_sum(1.5, 0, 1)
    with pytest.raises(ValueError):
        geometric_sum(0.5, 3, 2)


def test_geometric_sum_vs_direct_summation():
    rng = random.Random(7)
    for _ in range(200):
        a = rng.random() * 0.999
        x = rng.randint(0, 30)
        y = x + rng.randint(0, 60)
        direct = sum(a**k for k in range(x, y + 1))
        assert abs(geometric_sum(a, x, y) - direct) < 1e-12


def test_sum_distinct_singleton_matches_table():
    assert score_sum_distinct([1], {1: MU_ROOT}, c=1.0) == pytest.approx(0.9038, abs=2e-4)


def test_sum_distinct_revisit_not_recounted():
    assert score_sum_distinct([1, 2, 1], {1: 2.0, 2: 1.0}, c=1.0) == pytest.approx(0.75)


def test_sum_distinct_two_pages_matches_table():
    assert score_sum_distinct([1, 2], {1: 1.8076, 2: 1.9355}, c=1.0) == pytest.approx(1.2477, abs=2e-4)


def test_discounted_singleton_is_mu():
    assert score_discounted([1], {1: 3.25}, gamma=0.5) == 3.25


def test_discounted_all_zero():
    assert score_discounted([1, 2, 3], {}, gamma=0.5) == 0.0


def test_discounted_matches_table():
    assert score_discounted([1, 2], {1: 1.8076, 2: 1.9355}, gamma=GAMMA) == pytest.approx(3.2593, abs=2e-4)


def test_weighted_repeat_discounted_by_delta():
    assert score_weighted([1, 1], {1: 1.0}, gamma=0.5, delta=0.5) == pytest.approx(1.25)


def test_weighted_depth_three_matches_table():
    mu = {1: MU_ROOT, 3: MU_TIP3, 9: MU_TIP9}
    assert score_weighted([1, 3, 9], mu, gamma=GAMMA, delta=0.5) == pytest.approx(7.5940, abs=2e-4)


def test_weighted_uses_content_classes():
    # two pages with identical bodies count as a repeat
    records = records_from_edges({"a": [], "b": []}, contents={"a": "same", "b": "same"})
    _, store = build_from_records(records)
    classes = build_content_classes(store)
    mu = {1: 2.0, 2: 2.0}
    got = score_weighted([1, 2], mu, gamma=0.5, delta=0.5, classes=classes)
    assert got == pytest.approx(2.0 + 2.0 * 0.5 * 0.5)


def test_empty_trail_rejected():
    for fn in (
        lambda: score_sum_distinct([], {}),
        lambda: score_discounted([], {}, 0.5),
        lambda: score_weighted([], {}, 0.5, 0.5),
    ):
        with pytest.raises(ValueError):
            fn()


@given(
    st.lists(st.integers(min_value=1, max_value=50), min_size=1, max_size=8, unique=True),
    st.floats(min_value=0.05, max_value=0.95),
    st.floats(min_value=0.05, max_value=1.0),
)
def test_weighted_equals_discounted_without_repeats(nodes, gamma, delta):
    mu = {n: (n % 7) * 0.5 for n in nodes}
    assert score_weighted(nodes, mu, gamma, delta) == pytest.approx(
        score_discounted(nodes, mu, gamma)
    )


@given(st.lists(st.integers(min_value=1, max_value=30), min_size=1, max_size=8))
def test_sum_distinct_drops_when_appending_zero_page(nodes):
    mu = {n: 1.0 + (n % 5) for n in nodes}
    zero_page = 99
    before = score_sum_distinct(nodes, mu, c=1.0)
    after = score_sum_distinct(nodes + [zero_page], mu, c=1.0)
    assert after < before
