from __future__ import annotations

from collections.abc import Iterable, Sequence

import numpy as np

from ltsd.errors import InvalidArgumentError, raise_collected
from ltsd.interfaces import TAU, Action, AlphabetPartition, Lts


def _check_bounds(states: int, actions: int, density: float) -> None:
    errors: list[str] = []
    if states < 1:
        errors.append("Generated systems need at least one state.")
    if actions < 0:
        errors.append("The number of actions cannot be negative.")
    if not 0.0 <= density <= 1.0:
        errors.append("Transition density must lie in [0, 1].")
    if actions == 0 and density > 0.0:
        errors.append("A positive density needs at least one action.")
    raise_collected(errors)


def _random_lts(
    rng: np.random.Generator,
    states: int,
    labels: Sequence[Action],
    density: float,
    tau_density: float = 0.0,
) -> Lts:
    transitions: set[tuple[int, Action, int]] = set()
    if density > 0.0 and labels:
        # Spanning tree from state 0 keeps every state reachable.
        for state in range(1, states):
            parent = int(rng.integers(0, state))
            transitions.add((parent, labels[int(rng.integers(len(labels)))], state))
        hits = rng.random((states, len(labels), states)) < density
        for source, label, target in zip(*np.nonzero(hits)):
            transitions.add((int(source), labels[int(label)], int(target)))
    if tau_density > 0.0:
        taus = rng.random((states, states)) < tau_density
        for source, target in zip(*np.nonzero(taus)):
            transitions.add((int(source), TAU, int(target)))
    return Lts.build(num_states=states, transitions=transitions, initial=0)


def generate_lts(
    seed: int,
    states: int,
    actions: int,
    density: float,
    tau_density: float = 0.0,
) -> Lts:
    """Seeded random LTS over labels a0..a{actions-1}; every state is reachable when density > 0."""
    _check_bounds(states, actions, density)
    if not 0.0 <= tau_density <= 1.0:
        raise InvalidArgumentError("Internal transition density must lie in [0, 1].")
    rng = np.random.default_rng(seed)
    labels = [Action.visible(f"a{i}") for i in range(actions)]
    return _random_lts(rng, states, labels, density, tau_density)


def random_partition(rng: np.random.Generator, alphabet: Iterable[Action]) -> AlphabetPartition:
    """Each label goes to either half independently; empty halves are allowed."""
    sides: tuple[set[Action], set[Action]] = (set(), set())
    for action in sorted(alphabet, key=lambda a: a.text):
        sides[int(rng.integers(2))].add(action)
    return AlphabetPartition(sigma1=frozenset(sides[0]), sigma2=frozenset(sides[1]))


def random_instance(seed: int, max_states: int, max_actions: int) -> tuple[Lts, AlphabetPartition]:
    """A source system and a partition of its alphabet, as fed to the decomposition property suites."""
    rng = np.random.default_rng(seed)
    states = int(rng.integers(1, max_states + 1))
    actions = int(rng.integers(1, max_actions + 1))
    density = float(rng.uniform(0.05, 0.35))
    labels = [Action.visible(f"a{i}") for i in range(actions)]
    lts = _random_lts(rng, states, labels, density)
    return lts, random_partition(rng, lts.alphabet)


def generate_factor_pair(
    seed: int,
    states: int,
    actions: int,
    density: float,
    complementary: bool = True,
    tau_density: float = 0.0,
) -> tuple[Lts, Lts]:
    """Two factors with private labels l*/r*; with ``complementary`` they also share x* on the left and !x* on the right."""
    _check_bounds(states, actions, density)
    rng = np.random.default_rng(seed)
    shared = [f"x{i}" for i in range(actions)] if complementary else []
    left_labels = [Action.visible(f"l{i}") for i in range(actions)] + [Action.visible(x) for x in shared]
    right_labels = [Action.visible(f"r{i}") for i in range(actions)] + [Action.co_visible(x) for x in shared]
    left = _random_lts(rng, int(rng.integers(1, states + 1)), left_labels, density, tau_density)
    right = _random_lts(rng, int(rng.integers(1, states + 1)), right_labels, density, tau_density)
    return left, right
