from __future__ import annotations

import logging
from collections import deque
from dataclasses import dataclass
from functools import lru_cache
from typing import NamedTuple

from ltsd.decomposition.base import (
    ControlTag,
    StateOrigin,
    async_c_label,
    check_alphabet_contract,
    check_label_collisions,
    control_id,
    t_label,
    validate_source,
)
from ltsd.errors import InvalidArgumentError, ShapeError, raise_collected
from ltsd.interfaces import TAU, Action, AlphabetPartition, Lts, Transition
from ltsd.product import ProductStateMap, sync_product
from ltsd.settings import load_settings

logger = logging.getLogger(__name__)


class Receive(NamedTuple):
    """At control ``source`` the co-action ``action`` enqueues the message t_{target}."""

    source: int
    action: Action
    target: int


class QueueState(NamedTuple):
    control: int
    queue: tuple[int, ...]


@dataclass(frozen=True)
class QueueLts:
    """Control-level description of an LTS whose states also carry a FIFO of t-messages.

    A queued message is identified by the control state its consumption moves to;
    index 0 of a queue is its front.
    """

    control_names: tuple[str, ...]
    moves: frozenset[Transition]
    receives: frozenset[Receive]
    alphabet: frozenset[Action]
    capacity: int = 1
    initial: int = 0

    def __post_init__(self) -> None:
        errors: list[str] = []
        n = len(self.control_names)
        if self.capacity < 1:
            errors.append("Queue capacity must be at least 1.")
        if not 0 <= self.initial < n:
            errors.append(f"Initial control state {self.initial} is out of range.")
        for tr in self.moves:
            if not (0 <= tr.source < n and 0 <= tr.target < n):
                errors.append(f"Move {tr} has an endpoint out of range.")
        for rcv in self.receives:
            if not (0 <= rcv.source < n and 0 <= rcv.target < n):
                errors.append(f"Receive {rcv} has an endpoint out of range.")
            if rcv.action.is_internal:
                errors.append("Receives synchronise on visible co-actions only.")
        raise_collected(errors)

    @property
    def queue_alphabet(self) -> frozenset[str]:
        return frozenset(self.message_name(rcv.target) for rcv in self.receives)

    def accepts(self, state: QueueState) -> bool:
        """Receives are offered below capacity, unless the last queued message leads back to the current control.

        Such a message is consumed before the next one arrives, so a sender's
        self-loop never stacks a second message in the product.
        """
        if len(state.queue) >= self.capacity:
            return False
        return not state.queue or state.queue[-1] != state.control

    def message_name(self, control: int) -> str:
        return f"t_{{{self.control_names[control]}}}"

    def state_name(self, state: QueueState) -> str:
        messages = ",".join(self.message_name(m) for m in state.queue)
        return f"{self.control_names[state.control]}[{messages}]"


@dataclass(frozen=True)
class FlatQueueLts:
    lts: Lts
    states: tuple[QueueState, ...]


def _explore(component: QueueLts) -> FlatQueueLts:
    moves_from: dict[int, list[tuple[Action, int]]] = {}
    for tr in component.moves:
        moves_from.setdefault(tr.source, []).append((tr.action, tr.target))
    receives_from: dict[int, list[tuple[Action, int]]] = {}
    for rcv in component.receives:
        receives_from.setdefault(rcv.source, []).append((rcv.action, rcv.target))
    for table in (moves_from, receives_from):
        for entries in table.values():
            entries.sort(key=lambda entry: (entry[0].text, entry[1]))

    start = QueueState(component.initial, ())
    states = [start]
    ids = {start: 0}
    transitions: list[Transition] = []
    pending = deque([start])

    def visit(state: QueueState) -> int:
        if state not in ids:
            ids[state] = len(states)
            states.append(state)
            pending.append(state)
        return ids[state]

    while pending:
        current = pending.popleft()
        source = ids[current]
        for action, target in moves_from.get(current.control, ()):
            transitions.append(Transition(source, action, visit(QueueState(target, current.queue))))
        if component.accepts(current):
            for action, message in receives_from.get(current.control, ()):
                appended = QueueState(current.control, current.queue + (message,))
                transitions.append(Transition(source, action, visit(appended)))
        if current.queue:
            consumed = QueueState(current.queue[0], current.queue[1:])
            transitions.append(Transition(source, TAU, visit(consumed)))

    lts = Lts.build(
        num_states=len(states),
        transitions=transitions,
        initial=0,
        alphabet=component.alphabet,
        names=[component.state_name(state) for state in states],
    )
    return FlatQueueLts(lts=lts, states=tuple(states))


_explore_cached = lru_cache(maxsize=64)(_explore)


def flatten(component: QueueLts) -> Lts:
    """Plain LTS over the reachable (control, queue) states; receives into a full queue are omitted."""
    return _explore_cached(component).lts


def flatten_states(component: QueueLts) -> tuple[QueueState, ...]:
    return _explore_cached(component).states


@dataclass(frozen=True)
class AsyncDecomposition:
    source: Lts
    partition: AlphabetPartition
    m1: QueueLts
    m2: QueueLts
    origins1: tuple[StateOrigin, ...]
    origins2: tuple[StateOrigin, ...]

    @property
    def naming(self) -> tuple[dict[int, str], dict[int, str]]:
        return (
            dict(enumerate(flatten(self.m1).display_names)),
            dict(enumerate(flatten(self.m2).display_names)),
        )

    def component_alphabets(self) -> tuple[frozenset[Action], frozenset[Action]]:
        return self.m1.alphabet, self.m2.alphabet

    def compose(self) -> tuple[Lts, ProductStateMap]:
        return compose_async(self)


def _component(
    source: Lts,
    own: frozenset[Action],
    tag: ControlTag,
    capacity: int,
) -> tuple[QueueLts, tuple[StateOrigin, ...], set[str]]:
    names = source.display_names
    other = tag.other
    n = source.num_states

    origins: list[StateOrigin] = []
    for s in range(n):
        origins.append(StateOrigin(s, ControlTag.UP))
        origins.append(StateOrigin(s, ControlTag.DOWN))

    t_states: dict[tuple[Action, int], int] = {}
    moves: list[Transition] = []
    receives: list[Receive] = []
    synthesised: set[str] = set()

    for s in range(n):
        send = async_c_label(names[s], tag)
        peer_send = async_c_label(names[s], other)
        synthesised.update((send, peer_send))
        moves.append(Transition(control_id(s, tag), Action.visible(send), control_id(s, other)))
        # The peer's token arrives while this side still sits in the peer's control state.
        receives.append(Receive(control_id(s, other), Action.co_visible(peer_send), control_id(s, tag)))

    for tr in source.sorted_transitions():
        s, action, target = tr
        if action in own:
            key = (action, target)
            if key not in t_states:
                t_states[key] = len(origins)
                origins.append(StateOrigin(target, tag, action))
            mid = t_states[key]
            label = t_label(names[target], tag)
            synthesised.add(label)
            moves.append(Transition(control_id(s, tag), action, mid))
            moves.append(Transition(mid, Action.visible(label), control_id(target, tag)))
        else:
            label = t_label(names[target], other)
            synthesised.add(label)
            receives.append(Receive(control_id(s, other), Action.co_visible(label), control_id(target, other)))

    used = {tr.action for tr in moves} | {rcv.action for rcv in receives}
    component = QueueLts(
        control_names=tuple(origin.render(names) for origin in origins),
        moves=frozenset(moves),
        receives=frozenset(receives),
        alphabet=frozenset(own | used),
        capacity=capacity,
        initial=control_id(source.initial, ControlTag.UP),
    )
    return component, tuple(origins), synthesised


def decomp_a(source: Lts, partition: AlphabetPartition, capacity: int | None = None) -> AsyncDecomposition:
    validate_source(source, partition)
    if capacity is None:
        capacity = load_settings().decomposition.default_queue_capacity
    if capacity < 1:
        raise InvalidArgumentError("Queue capacity must be at least 1.")

    m1, origins1, labels1 = _component(source, partition.sigma1, ControlTag.UP, capacity)
    m2, origins2, labels2 = _component(source, partition.sigma2, ControlTag.DOWN, capacity)
    check_label_collisions(source.alphabet, labels1 | labels2)
    raise_collected(list(check_alphabet_contract(partition, m1.alphabet, m2.alphabet)), ShapeError)

    logger.debug("decomp_a: %d-state source, queue capacity %d", source.num_states, capacity)
    return AsyncDecomposition(
        source=source,
        partition=partition,
        m1=m1,
        m2=m2,
        origins1=origins1,
        origins2=origins2,
    )


def queue_lengths(decomposition: AsyncDecomposition, state_map: ProductStateMap) -> tuple[tuple[int, int], ...]:
    """Queue lengths of both components in every product state."""
    left, right = flatten_states(decomposition.m1), flatten_states(decomposition.m2)
    return tuple((len(left[x].queue), len(right[y].queue)) for x, y in state_map.pairs)


def check_async_shape(decomposition: AsyncDecomposition, product: Lts, state_map: ProductStateMap) -> tuple[str, ...]:
    violations = [
        f"Product state {product.state_name(state)} holds more than one queued message."
        for state, (left, right) in enumerate(queue_lengths(decomposition, state_map))
        if left > 1 or right > 1
    ]
    violations.extend(
        f"Co-action '{tr.action}' fires without its sender in the product."
        for tr in product.transitions
        if tr.action in decomposition.m1.alphabet - decomposition.partition.sigma1
        or tr.action in decomposition.m2.alphabet - decomposition.partition.sigma2
    )
    return tuple(dict.fromkeys(violations))


def compose_async(decomposition: AsyncDecomposition) -> tuple[Lts, ProductStateMap]:
    product, state_map = sync_product(flatten(decomposition.m1), flatten(decomposition.m2))
    raise_collected(list(check_async_shape(decomposition, product, state_map)), ShapeError)
    return product, state_map


def async_relation_witness(decomposition: AsyncDecomposition, state_map: ProductStateMap) -> frozenset[tuple[int, int]]:
    """(source state, product state) pairs: each product state is related to the source state its progress stands for.

    A product state stands for source state s when, after delivering every queued
    message and completing any pending t-move, both components agree on control s_i.
    """
    left_states, right_states = flatten_states(decomposition.m1), flatten_states(decomposition.m2)
    o1, o2 = decomposition.origins1, decomposition.origins2
    pairs: set[tuple[int, int]] = set()

    def settled(state: QueueState, origins: tuple[StateOrigin, ...]) -> StateOrigin:
        control = state.queue[-1] if state.queue else state.control
        origin = origins[control]
        return StateOrigin(origin.source_state, origin.tag)

    for product_state, (x, y) in enumerate(state_map.pairs):
        left_state, right_state = left_states[x], right_states[y]
        # A pending t-move already stands for its target.
        pending = [o1[left_state.control], o2[right_state.control]]
        mid = [origin for origin in pending if not origin.is_control]
        if mid:
            pairs.add((mid[0].source_state, product_state))
            continue
        left, right = settled(left_state, o1), settled(right_state, o2)
        if left == right:
            pairs.add((left.source_state, product_state))
    return frozenset(pairs)
