"""Small fixed systems used by the demo, the docs and the tests."""

from __future__ import annotations

from ltsd.interfaces import Action, AlphabetPartition, Lts


def two_state_example() -> Lts:
    """r -a1-> s, s -a2-> r, s -b1-> r; decomposed over {a1, a2} / {b1}."""
    a1, a2, b1 = Action.visible("a1"), Action.visible("a2"), Action.visible("b1")
    return Lts.build(
        num_states=2,
        transitions=[(0, a1, 1), (1, a2, 0), (1, b1, 0)],
        initial=0,
        names=["r", "s"],
    )


def two_state_partition() -> AlphabetPartition:
    return AlphabetPartition.from_labels(["a1", "a2"], ["b1"])


def choice_example() -> Lts:
    """p -a-> r, p -b-> s: no decomposition over {a} / {b} preserves its divergence behaviour."""
    a, b = Action.visible("a"), Action.visible("b")
    return Lts.build(
        num_states=3,
        transitions=[(0, a, 1), (0, b, 2)],
        initial=0,
        names=["p", "r", "s"],
    )


def choice_partition() -> AlphabetPartition:
    return AlphabetPartition.from_labels(["a"], ["b"])
