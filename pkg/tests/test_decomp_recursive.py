import numpy as np
import pytest

from ltsd.decomposition import compose_sync, decomp_s, decompose_recursive
from ltsd.decomposition.base import as_plain, restore_co_actions
from ltsd.equivalence import branching_bisim
from ltsd.errors import InvalidArgumentError
from ltsd.examples import choice_example, two_state_example
from ltsd.generator import random_instance, random_partition
from ltsd.interfaces import Action, AlphabetPartition
from ltsd.product import compose_all


def test_three_way_split_composes_back() -> None:
    source = two_state_example()
    components = decompose_recursive(source, [["a1"], ["a2"], ["b1"]])

    assert len(components) == 3
    assert Action.visible("a1") in components[0].alphabet
    assert Action.visible("a2") in components[1].alphabet
    assert Action.visible("b1") in components[2].alphabet
    assert Action.visible("a1") not in components[1].alphabet | components[2].alphabet
    assert branching_bisim(source, compose_all(components)).verdict


def test_two_sets_match_a_single_split() -> None:
    source = two_state_example()
    components = decompose_recursive(source, [["a1", "a2"], ["b1"]])
    direct = decomp_s(source, AlphabetPartition.from_labels(["a1", "a2"], ["b1"]))

    assert components == (direct.m1, direct.m2)


def test_a_component_decomposes_again_and_composes_back() -> None:
    for seed in range(20):
        source, partition = random_instance(seed, max_states=4, max_actions=3)
        component = decomp_s(source, partition).m2
        plain = as_plain(component)
        split = random_partition(np.random.default_rng(seed), plain.alphabet)

        product, _ = compose_sync(decomp_s(plain, split))
        assert branching_bisim(plain, product).verdict, f"seed {seed}"
        assert branching_bisim(component, restore_co_actions(product)).verdict, f"seed {seed}"


def test_one_set_returns_the_source() -> None:
    source = choice_example()
    assert decompose_recursive(source, [["a", "b"]]) == (source,)


def test_async_mode_splits_in_two() -> None:
    source = choice_example()
    left, right = decompose_recursive(source, [["a"], ["b"]], mode="async", capacity=1)
    assert branching_bisim(source, compose_all((left, right))).verdict

    with pytest.raises(InvalidArgumentError, match="exactly two"):
        decompose_recursive(two_state_example(), [["a1"], ["a2"], ["b1"]], mode="async")


@pytest.mark.parametrize(
    ("parts", "message"),
    [
        ([["a1", "a2"], ["a2", "b1"]], "overlap"),
        ([["a1"], ["b1"]], "do not cover: a2"),
        ([["a1", "a2"], ["b1", "zz"]], "outside the alphabet"),
    ],
)
def test_label_sets_are_validated(parts: list[list[str]], message: str) -> None:
    with pytest.raises(InvalidArgumentError, match=message):
        decompose_recursive(two_state_example(), parts)


def test_unknown_mode() -> None:
    with pytest.raises(InvalidArgumentError, match="Unknown decomposition mode"):
        decompose_recursive(choice_example(), [["a"], ["b"]], mode="lossy")
