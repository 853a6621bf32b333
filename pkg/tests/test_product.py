import pytest

from ltsd.decomposition import decomp_s
from ltsd.examples import two_state_example, two_state_partition
from ltsd.interfaces import TAU, Action, Lts
from ltsd.product import compose_all, hidden_actions, product_warnings, sync_product

a = Action.visible("a")
b = Action.visible("b")


def test_two_state_components_compose_to_seven_states() -> None:
    decomposition = decomp_s(two_state_example(), two_state_partition())
    product, state_map = sync_product(decomposition.m1, decomposition.m2)

    visible = [tr for tr in product.transitions if not tr.action.is_internal]
    assert product.num_states == 7
    assert len(product.transitions) == 10
    assert sorted(tr.action.text for tr in visible) == ["a1", "a2", "b1"]
    assert product.labels() == {"a1", "a2", "b1"}
    assert state_map.pair_of(0) == (decomposition.m1.initial, decomposition.m2.initial)
    assert len(state_map) == 7


def test_single_state_factor_is_an_identity() -> None:
    lts = Lts.build(3, [(0, a, 1), (1, b, 0)], names=["x", "y", "z"])
    unit = Lts.build(1, [])

    product, state_map = sync_product(lts, unit)

    assert product.num_states == 2
    assert {(state_map.pair_of(tr.source)[0], tr.action, state_map.pair_of(tr.target)[0]) for tr in product.transitions} == {
        (0, a, 1),
        (1, b, 0),
    }
    assert product.alphabet == frozenset({a, b})
    assert product.state_name(0) == "(x,0)"


def test_complementary_actions_synchronise_into_one_internal_step() -> None:
    left = Lts.build(2, [(0, a, 1)])
    right = Lts.build(2, [(0, a.co(), 1)])

    product, state_map = sync_product(left, right)

    assert product.num_states == 2
    assert set(product.transitions) == {(0, TAU, 1)}
    assert product.alphabet == frozenset()
    assert state_map.state_of(1, 1) == 1
    assert hidden_actions(left.alphabet, right.alphabet) == frozenset({a, a.co()})


def test_internal_steps_of_each_factor_interleave() -> None:
    left = Lts.build(2, [(0, TAU, 1)])
    right = Lts.build(2, [(0, TAU, 1)])

    product, _ = sync_product(left, right)

    assert product.num_states == 4
    assert all(tr.action == TAU for tr in product.transitions)
    assert len(product.transitions) == 4


def test_hidden_labels_never_label_product_transitions() -> None:
    left = Lts.build(2, [(0, a, 1), (1, b, 0)])
    right = Lts.build(2, [(0, a.co(), 1), (1, a.co(), 0)])

    product, _ = sync_product(left, right)
    hidden = hidden_actions(left.alphabet, right.alphabet)

    assert not any(tr.action in hidden for tr in product.transitions)


def test_factor_holding_an_action_and_its_co_action_keeps_the_unmatched_one() -> None:
    left = Lts.build(2, [(0, a, 1), (0, a.co(), 1)])
    right = Lts.build(1, [(0, a.co(), 0)])

    product, _ = sync_product(left, right)

    assert (0, a.co(), 1) in {tuple(tr) for tr in product.transitions}
    assert a.co() in product.alphabet


def test_shared_plain_labels_produce_a_warning() -> None:
    left = Lts.build(1, [(0, a, 0)])
    right = Lts.build(1, [(0, a, 0), (0, b, 0)])

    warnings = product_warnings(left, right)

    assert len(warnings) == 1
    assert "'a'" in warnings[0]
    assert product_warnings(left, Lts.build(1, [(0, b, 0)])) == ()


def test_compose_all_folds_left_to_right() -> None:
    left = Lts.build(2, [(0, a, 1)])
    middle = Lts.build(1, [(0, b, 0)])
    right = Lts.build(2, [(0, a.co(), 1)])

    assert compose_all([left]) is left
    folded = compose_all([left, middle, right])
    assert folded.alphabet == frozenset({b})
    assert folded.num_states == 2

    with pytest.raises(ValueError):
        compose_all([])
