import pytest

from ltsd.confluence import ConfluenceViolation, dpbb_impossibility_demo, factor_sets, is_confluent
from ltsd.decomposition import compose_async, compose_sync, decomp_a, decomp_s, flatten
from ltsd.errors import InvalidArgumentError
from ltsd.examples import choice_example, choice_partition, two_state_example, two_state_partition
from ltsd.generator import generate_factor_pair
from ltsd.interfaces import Action, Lts
from ltsd.product import sync_product
from ltsd.settings import load_settings

A, B, C = Action.visible("a"), Action.visible("b"), Action.visible("c")


def test_choice_is_not_confluent() -> None:
    report = is_confluent(choice_example(), {A}, {B})

    assert not report.verdict
    assert report.violations == (ConfluenceViolation(0, A, B, 1, 2),)
    assert report.to_json_dict(choice_example())["violations"] == [
        {"state": "p", "a": "a", "b": "b", "state_a": "r", "state_b": "s"}
    ]


def test_diamond_is_confluent() -> None:
    diamond = Lts.build(4, [(0, A, 1), (0, B, 2), (1, B, 3), (2, A, 3)])
    assert is_confluent(diamond, {A}, {B}).verdict


def test_diamond_must_close_on_a_common_state() -> None:
    split = Lts.build(5, [(0, A, 1), (0, B, 2), (1, B, 3), (2, A, 4)])
    assert not is_confluent(split, {A}, {B}).verdict


def test_empty_set_is_trivially_confluent() -> None:
    assert is_confluent(choice_example(), set(), {B}).verdict
    assert is_confluent(choice_example(), {C}, {A, B}).verdict


def test_overlapping_sets_are_rejected() -> None:
    with pytest.raises(InvalidArgumentError, match="overlap on a"):
        is_confluent(choice_example(), {A, B}, {A})


def test_factor_sets_drop_synchronised_labels() -> None:
    left = frozenset({Action.visible("l0"), Action.visible("x0")})
    right = frozenset({Action.visible("r0"), Action.co_visible("x0")})
    assert factor_sets(left, right) == (frozenset({Action.visible("l0")}), frozenset({Action.visible("r0")}))


def test_products_of_independent_factors_are_confluent() -> None:
    for seed in range(load_settings().harness.factor_pairs):
        left, right = generate_factor_pair(
            seed, states=5, actions=2, density=0.3, complementary=seed % 2 == 0, tau_density=0.1
        )
        product, _ = sync_product(left, right)
        report = is_confluent(product, *factor_sets(left.alphabet, right.alphabet))
        assert report.verdict, f"seed {seed}: {report.violations[:1]}"


def test_decomposition_products_are_confluent_over_the_partition() -> None:
    source = two_state_example()
    sync = decomp_s(source, two_state_partition())
    product, _ = compose_sync(sync)
    assert is_confluent(product, *factor_sets(sync.m1.alphabet, sync.m2.alphabet)).verdict

    asynchronous = decomp_a(source, two_state_partition())
    product, _ = compose_async(asynchronous)
    left, right = flatten(asynchronous.m1), flatten(asynchronous.m2)
    assert is_confluent(product, *factor_sets(left.alphabet, right.alphabet)).verdict


def test_impossibility_demo() -> None:
    report = dpbb_impossibility_demo(capacities=(1, 2, 3))

    assert report.holds
    assert not report.source_divergent
    assert [row.pipeline for row in report.rows] == ["sync", "async", "async", "async"]
    assert all(row.product_confluent for row in report.rows)
    assert all(row.divergent_states > 0 for row in report.rows)
    assert {row.product_states for row in report.rows if row.pipeline == "async"} == {
        compose_async(decomp_a(choice_example(), choice_partition(), 1))[0].num_states
    }

    frame = report.to_frame()
    assert list(frame.columns) == [
        "pipeline",
        "capacity",
        "product_states",
        "product_transitions",
        "branching_bisimilar",
        "divergence_preserving",
        "divergent_states",
        "product_confluent",
    ]
    assert frame["branching_bisimilar"].all()
    assert not frame["divergence_preserving"].any()

    payload = report.to_json_dict()
    assert payload["holds"] is True
    assert payload["source_divergent_states"] == 0
    assert payload["source_confluence"]["verdict"] is False
    assert "violation: p -a-> r, p -b-> s" in report.render_text()
