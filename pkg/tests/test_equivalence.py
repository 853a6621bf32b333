from hypothesis import given, settings
from hypothesis.strategies import integers

from ltsd.decomposition import compose_async, compose_sync, decomp_a, decomp_s
from ltsd.equivalence import (
    DIVERGENCE_ACTION,
    LEFT,
    RIGHT,
    CounterexampleStep,
    UnionState,
    branching_bisim,
    check_equivalence,
    dpbb,
    pairs_outside_blocks,
    validate_witness,
)
from ltsd.examples import choice_example, choice_partition, two_state_example, two_state_partition
from ltsd.generator import generate_lts, random_instance
from ltsd.interfaces import TAU, Action, Lts

A, B = Action.visible("a"), Action.visible("b")


def _chain() -> Lts:
    return Lts.build(3, [(0, A, 1), (1, B, 2)])


def _short() -> Lts:
    return Lts.build(2, [(0, A, 1)])


def test_every_system_is_equivalent_to_itself() -> None:
    for lts in (two_state_example(), choice_example(), _chain(), Lts.build(1, [(0, TAU, 0)])):
        assert branching_bisim(lts, lts).verdict
        assert dpbb(lts, lts).verdict


def test_inert_internal_steps_are_invisible() -> None:
    direct = Lts.build(2, [(0, A, 1)])
    delayed = Lts.build(3, [(0, TAU, 1), (1, A, 2)])

    result = branching_bisim(direct, delayed)
    assert result.verdict
    assert result.block_of(LEFT, 0) == result.block_of(RIGHT, 0) == result.block_of(RIGHT, 1)
    assert dpbb(direct, delayed).verdict


def test_non_inert_internal_step_is_observed() -> None:
    # a.0 + b.0 versus a.0 + tau.b.0
    choice = Lts.build(3, [(0, A, 1), (0, B, 2)])
    preempted = Lts.build(4, [(0, A, 1), (0, TAU, 2), (2, B, 3)])
    assert not branching_bisim(choice, preempted).verdict


def test_counterexample_walks_to_the_missing_move() -> None:
    result = branching_bisim(_chain(), _short())

    assert not result.verdict
    assert result.counterexample == (
        CounterexampleStep(0, 0, "a", LEFT, "mismatch"),
        CounterexampleStep(1, 1, "b", LEFT, "no-match"),
    )


def test_counterexample_names_the_offering_side() -> None:
    result = branching_bisim(_short(), _chain())

    assert result.counterexample == (
        CounterexampleStep(0, 0, "a", LEFT, "mismatch"),
        CounterexampleStep(1, 1, "b", RIGHT, "no-match"),
    )
    payload = result.to_json_dict(_short(), _chain())
    assert payload["verdict"] is False
    assert payload["counterexample"][-1] == {
        "left": "1",
        "right": "1",
        "action": "b",
        "offered_by": "right",
        "reason": "no-match",
    }


def test_divergence_only_matters_when_asked_for() -> None:
    spinning = Lts.build(1, [(0, TAU, 0)])
    stuck = Lts.build(1, [])

    assert branching_bisim(spinning, stuck).verdict
    result = dpbb(spinning, stuck)
    assert not result.verdict
    assert result.divergence_sensitive
    assert result.counterexample == (CounterexampleStep(0, 0, DIVERGENCE_ACTION, LEFT, "divergence"),)


def test_choice_source_against_its_sync_product() -> None:
    source = choice_example()
    product, _ = compose_sync(decomp_s(source, choice_partition()))

    assert branching_bisim(source, product).verdict
    result = dpbb(source, product)
    assert not result.verdict
    assert result.counterexample[-1].reason == "divergence"
    assert result.counterexample[-1].offered_by == RIGHT


def test_json_blocks_use_state_names() -> None:
    source = two_state_example()
    product, _ = compose_sync(decomp_s(source, two_state_partition()))

    payload = branching_bisim(source, product).to_json_dict(source, product)
    assert payload["verdict"] is True
    assert payload["divergence_sensitive"] is False
    members = {tuple(member) for block in payload["blocks"] for member in block}
    assert ("left", "r") in members
    assert ("right", "(t_{a1,s_u},r_u)") in members
    assert len(members) == source.num_states + product.num_states


def test_validate_witness_accepts_the_computed_partition() -> None:
    source = two_state_example()
    product, _ = compose_sync(decomp_s(source, two_state_partition()))
    result = branching_bisim(source, product)

    assert validate_witness(source, product, result.blocks) == ()


def test_validate_witness_reports_broken_partitions() -> None:
    source = two_state_example()
    product, _ = compose_sync(decomp_s(source, two_state_partition()))
    everything = [UnionState(LEFT, s) for s in range(source.num_states)] + [
        UnionState(RIGHT, s) for s in range(product.num_states)
    ]

    assert validate_witness(source, product, [everything])
    assert any("not covered" in v for v in validate_witness(source, product, [everything[:2]]))
    doubled = validate_witness(source, product, [everything, everything[:1]])
    assert any("more than one block" in v for v in doubled)


def test_validate_witness_divergence_clause() -> None:
    spinning = Lts.build(1, [(0, TAU, 0)])
    stuck = Lts.build(1, [])
    block = [[UnionState(LEFT, 0), UnionState(RIGHT, 0)]]

    assert validate_witness(spinning, stuck, block) == ()
    violations = validate_witness(spinning, stuck, block, divergence_sensitive=True)
    assert len(violations) == 1
    assert "mixes divergent" in violations[0]


def test_pairs_outside_blocks() -> None:
    result = branching_bisim(_short(), _short())
    assert pairs_outside_blocks(result, [(0, 0), (1, 1)]) == ()
    assert pairs_outside_blocks(result, [(0, 1), (1, 1)]) == ((0, 1),)


@settings(deadline=None, max_examples=60)
@given(seed=integers(min_value=0, max_value=10_000), divergence=integers(min_value=0, max_value=1))
def test_verdict_is_symmetric(seed: int, divergence: int) -> None:
    left = generate_lts(seed, states=4, actions=2, density=0.3, tau_density=0.2)
    right = generate_lts(seed + 1, states=4, actions=2, density=0.3, tau_density=0.2)

    forward = check_equivalence(left, right, divergence_sensitive=bool(divergence))
    backward = check_equivalence(right, left, divergence_sensitive=bool(divergence))
    assert forward.verdict == backward.verdict
    if forward.verdict:
        assert validate_witness(left, right, forward.blocks, divergence_sensitive=bool(divergence)) == ()
    else:
        assert forward.counterexample


def test_source_and_both_products_are_pairwise_equivalent() -> None:
    for seed in range(40):
        source, partition = random_instance(seed, max_states=5, max_actions=3)
        synchronous, _ = compose_sync(decomp_s(source, partition))
        asynchronous, _ = compose_async(decomp_a(source, partition, capacity=1))

        assert branching_bisim(source, synchronous).verdict, f"seed {seed}"
        assert branching_bisim(source, asynchronous).verdict, f"seed {seed}"
        assert branching_bisim(synchronous, asynchronous).verdict, f"seed {seed}"


@settings(deadline=None, max_examples=60)
@given(seed=integers(min_value=0, max_value=10_000), divergence=integers(min_value=0, max_value=1))
def test_verdict_is_transitive(seed: int, divergence: int) -> None:
    first, second, third = (
        generate_lts(seed + offset, states=3, actions=1, density=0.4, tau_density=0.2) for offset in range(3)
    )
    sensitive = bool(divergence)

    if check_equivalence(first, second, sensitive).verdict and check_equivalence(second, third, sensitive).verdict:
        assert check_equivalence(first, third, sensitive).verdict
