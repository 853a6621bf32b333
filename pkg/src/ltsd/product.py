from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import cached_property

from ltsd.interfaces import TAU, Action, Lts, Transition

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class ProductStateMap:
    """Product state id -> (left state id, right state id), reachable pairs only."""

    pairs: tuple[tuple[int, int], ...]

    @cached_property
    def _lookup(self) -> dict[tuple[int, int], int]:
        return {pair: state for state, pair in enumerate(self.pairs)}

    def pair_of(self, state: int) -> tuple[int, int]:
        return self.pairs[state]

    def state_of(self, left: int, right: int) -> int | None:
        return self._lookup.get((left, right))

    def __len__(self) -> int:
        return len(self.pairs)


def hidden_actions(left_alphabet: frozenset[Action], right_alphabet: frozenset[Action]) -> frozenset[Action]:
    """Labels removed from the product alphabet: every a, co(a) with a on the left and co(a) on the right."""
    hidden: set[Action] = set()
    for action in left_alphabet:
        partner = action.co()
        if partner in right_alphabet:
            hidden.update((action, partner))
    return frozenset(hidden)


def product_alphabet(left: Lts, right: Lts) -> frozenset[Action]:
    return (left.alphabet | right.alphabet) - hidden_actions(left.alphabet, right.alphabet)


def product_warnings(left: Lts, right: Lts) -> tuple[str, ...]:
    warnings = [
        f"Label '{action}' occurs in both factors without its co-action; the product interleaves it independently."
        for action in sorted(left.alphabet & right.alphabet, key=lambda a: a.text)
    ]
    return tuple(dict.fromkeys(warnings))


def _moves(lts: Lts, state: int) -> list[tuple[Action, int]]:
    return sorted(lts.index.outgoing(state), key=lambda move: (move[0].text, move[1]))


def sync_product(left: Lts, right: Lts) -> tuple[Lts, ProductStateMap]:
    left_alphabet, right_alphabet = left.alphabet, right.alphabet

    start = (left.initial, right.initial)
    pairs: list[tuple[int, int]] = [start]
    ids = {start: 0}
    transitions: list[tuple[int, Action, int]] = []
    queue = deque([start])

    def visit(pair: tuple[int, int]) -> int:
        if pair not in ids:
            ids[pair] = len(pairs)
            pairs.append(pair)
            queue.append(pair)
        return ids[pair]

    while queue:
        s, t = queue.popleft()
        source = ids[(s, t)]
        left_moves = _moves(left, s)
        right_moves = _moves(right, t)

        for action, s_next in left_moves:
            if action.is_internal or action.co() not in right_alphabet:
                transitions.append((source, action, visit((s_next, t))))

        for action, t_next in right_moves:
            if action.is_internal or action.co() not in left_alphabet:
                transitions.append((source, action, visit((s, t_next))))

        for action, s_next in left_moves:
            if action.is_internal:
                continue
            partner = action.co()
            if partner not in right_alphabet:
                continue
            for t_next in right.index.successors(t, partner):
                transitions.append((source, TAU, visit((s_next, t_next))))

    names = None
    if left.names is not None or right.names is not None:
        names = tuple(f"({left.state_name(s)},{right.state_name(t)})" for s, t in pairs)

    # A label can be hidden and still move alone when a factor holds both a and co(a).
    used = {action for _, action, _ in transitions if not action.is_internal}
    product = Lts(
        num_states=len(pairs),
        alphabet=product_alphabet(left, right) | used,
        transitions=frozenset(Transition(*tr) for tr in transitions),
        initial=0,
        names=names,
    )
    logger.debug("product of %d x %d states has %d reachable states", left.num_states, right.num_states, len(pairs))
    return product, ProductStateMap(pairs=tuple(pairs))


def compose_all(components: list[Lts] | tuple[Lts, ...]) -> Lts:
    """Binary products folded left to right."""
    if not components:
        raise ValueError("compose_all needs at least one component.")
    result = components[0]
    for component in components[1:]:
        result, _ = sync_product(result, component)
    return result
