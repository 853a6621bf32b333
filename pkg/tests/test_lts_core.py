import pytest
from hypothesis import given, settings
from hypothesis.strategies import booleans, floats, integers, text

from ltsd.errors import InvalidArgumentError
from ltsd.generator import generate_lts
from ltsd.interfaces import TAU, Action, ActionKind, AlphabetPartition, Lts, Transition
from ltsd.lts import co_action, divergent_states, reachable_states, tau_closure


def test_co_action_flips_visibility() -> None:
    a = Action.visible("a")

    assert co_action(a) == Action.co_visible("a")
    assert co_action(Action.co_visible("a")) == a


def test_internal_action_has_no_co_action() -> None:
    with pytest.raises(InvalidArgumentError):
        co_action(TAU)


@given(label=text(min_size=1, max_size=8), barred=booleans())
def test_co_action_is_an_involution(label: str, barred: bool) -> None:
    try:
        action = Action.co_visible(label) if barred else Action.visible(label)
    except InvalidArgumentError:
        return
    assert co_action(co_action(action)) == action


def test_action_parse_accepts_both_internal_spellings() -> None:
    assert Action.parse("tau") is TAU
    assert Action.parse("i") is TAU
    assert Action.parse("!x").kind is ActionKind.CO_VISIBLE
    assert Action.parse("!x").text == "!x"


def test_lts_construction_reports_every_problem_at_once() -> None:
    a = Action.visible("a")
    with pytest.raises(InvalidArgumentError) as excinfo:
        Lts(num_states=2, alphabet=frozenset(), transitions=frozenset({Transition(0, a, 5)}), initial=3)

    message = str(excinfo.value)
    assert "Initial state 3" in message
    assert "out of range" in message
    assert "missing from the alphabet" in message
    assert message.count("; ") >= 2


def test_state_names_must_be_unique() -> None:
    a = Action.visible("a")
    with pytest.raises(InvalidArgumentError, match="repeated: y"):
        Lts.build(3, [(0, a, 1), (1, a, 2)], names=["x", "y", "y"])


def test_tau_closure_without_internal_moves_is_the_state_itself() -> None:
    lts = Lts.build(2, [(0, Action.visible("a"), 1)])
    assert tau_closure(lts, 0) == frozenset({0})


def test_tau_closure_follows_a_three_state_cycle() -> None:
    lts = Lts.build(4, [(0, TAU, 1), (1, TAU, 2), (2, TAU, 0), (2, Action.visible("a"), 3)])
    assert tau_closure(lts, 1) == frozenset({0, 1, 2})


def test_divergent_states_includes_states_reaching_a_cycle() -> None:
    lts = Lts.build(4, [(0, TAU, 1), (1, TAU, 1), (2, Action.visible("a"), 3)])

    assert divergent_states(lts) == frozenset({0, 1})


@settings(deadline=None, max_examples=80)
@given(
    seed=integers(min_value=0, max_value=10_000),
    states=integers(min_value=1, max_value=8),
    tau_density=floats(min_value=0.05, max_value=0.5),
)
def test_divergent_states_match_bounded_unrolling(seed: int, states: int, tau_density: float) -> None:
    lts = generate_lts(seed, states, actions=0, density=0.0, tau_density=tau_density)

    # states with an internal path of length num_states + 1
    reaching = set(range(lts.num_states))
    for _ in range(lts.num_states + 1):
        reaching = {tr.source for tr in lts.transitions if tr.target in reaching}
    assert set(divergent_states(lts)) == reaching


def test_divergent_states_empty_without_internal_moves() -> None:
    lts = Lts.build(2, [(0, Action.visible("a"), 1), (1, Action.visible("b"), 0)])
    assert divergent_states(lts) == frozenset()


def test_reachable_states_in_breadth_first_order() -> None:
    a = Action.visible("a")
    lts = Lts.build(5, [(0, a, 2), (0, a, 1), (2, a, 3)])
    assert reachable_states(lts) == [0, 1, 2, 3]


def test_partition_rejects_overlap_and_co_actions() -> None:
    with pytest.raises(InvalidArgumentError) as excinfo:
        AlphabetPartition.from_labels(["a", "!b"], ["a"])

    assert "overlap" in str(excinfo.value)
    assert "Co-action" in str(excinfo.value)
