from __future__ import annotations

import logging
from dataclasses import dataclass

from ltsd.decomposition.base import (
    ControlTag,
    StateOrigin,
    c_label,
    check_alphabet_contract,
    check_label_collisions,
    control_id,
    t_label,
    validate_source,
)
from ltsd.errors import ShapeError, raise_collected
from ltsd.interfaces import TAU, Action, AlphabetPartition, Lts
from ltsd.product import ProductStateMap, sync_product

logger = logging.getLogger(__name__)


@dataclass(frozen=True)
class SyncDecomposition:
    source: Lts
    partition: AlphabetPartition
    m1: Lts
    m2: Lts
    origins1: tuple[StateOrigin, ...]
    origins2: tuple[StateOrigin, ...]

    @property
    def naming(self) -> tuple[dict[int, str], dict[int, str]]:
        names = self.source.display_names
        return (
            {state: origin.render(names) for state, origin in enumerate(self.origins1)},
            {state: origin.render(names) for state, origin in enumerate(self.origins2)},
        )

    def component_alphabets(self) -> tuple[frozenset[Action], frozenset[Action]]:
        return self.m1.alphabet, self.m2.alphabet

    def compose(self) -> tuple[Lts, ProductStateMap]:
        return compose_sync(self)


def _component(
    source: Lts,
    own: frozenset[Action],
    tag: ControlTag,
) -> tuple[Lts, tuple[StateOrigin, ...], set[str]]:
    names = source.display_names
    other = tag.other
    n = source.num_states

    origins: list[StateOrigin] = []
    for s in range(n):
        origins.append(StateOrigin(s, ControlTag.UP))
        origins.append(StateOrigin(s, ControlTag.DOWN))

    t_states: dict[tuple[Action, int], int] = {}
    transitions: list[tuple[int, Action, int]] = []
    synthesised: set[str] = set()

    # Token passing, top pattern.
    for s in range(n):
        send = c_label(names[s], tag)
        receive = c_label(names[s], other)
        synthesised.update((send, receive))
        transitions.append((control_id(s, tag), Action.visible(send), control_id(s, other)))
        transitions.append((control_id(s, other), Action.co_visible(receive), control_id(s, tag)))

    # Mirrored moves, bottom pattern.
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
            transitions.append((control_id(s, tag), action, mid))
            transitions.append((mid, Action.visible(label), control_id(target, tag)))
        else:
            label = t_label(names[target], other)
            synthesised.add(label)
            transitions.append((control_id(s, other), Action.co_visible(label), control_id(target, other)))

    component = Lts.build(
        num_states=len(origins),
        transitions=transitions,
        initial=control_id(source.initial, ControlTag.UP),
        alphabet=own,
        names=[origin.render(names) for origin in origins],
    )
    return component, tuple(origins), synthesised


def decomp_s(source: Lts, partition: AlphabetPartition) -> SyncDecomposition:
    validate_source(source, partition)

    m1, origins1, labels1 = _component(source, partition.sigma1, ControlTag.UP)
    m2, origins2, labels2 = _component(source, partition.sigma2, ControlTag.DOWN)
    check_label_collisions(source.alphabet, labels1 | labels2)
    raise_collected(list(check_alphabet_contract(partition, m1.alphabet, m2.alphabet)), ShapeError)

    logger.debug("decomp_s: %d-state source -> components of %d and %d states", source.num_states, m1.num_states, m2.num_states)
    return SyncDecomposition(
        source=source,
        partition=partition,
        m1=m1,
        m2=m2,
        origins1=origins1,
        origins2=origins2,
    )


def check_sync_shape(decomposition: SyncDecomposition, product: Lts, state_map: ProductStateMap) -> tuple[str, ...]:
    """Token cycles between (s_i, s_i) pairs and single internal completions after every visible move."""
    o1, o2 = decomposition.origins1, decomposition.origins2
    index = product.index
    violations: list[str] = []

    for state, (x, y) in enumerate(state_map.pairs):
        left, right = o1[x], o2[y]
        if left.is_control and right.is_control and left == right:
            peer = control_id(left.source_state, left.tag.other)
            token_target = state_map.state_of(peer, peer)
            if token_target is None or token_target not in index.successors(state, TAU):
                violations.append(f"State {product.state_name(state)} lacks its token-passing internal step.")

        for action, target in index.outgoing(state):
            if action.is_internal:
                continue
            tx, ty = state_map.pair_of(target)
            mid_left, mid_right = o1[tx], o2[ty]
            if mid_left.is_control == mid_right.is_control:
                violations.append(f"Visible '{action}' from {product.state_name(state)} does not end in a mid-move state.")
                continue
            t_origin = mid_left if not mid_left.is_control else mid_right
            moves = index.outgoing(target)
            landing = control_id(t_origin.source_state, t_origin.tag)
            expected = state_map.state_of(landing, landing)
            if len(moves) != 1 or not moves[0][0].is_internal or moves[0][1] != expected:
                violations.append(
                    f"Mid-move state {product.state_name(target)} does not complete with one internal step."
                )

    return tuple(dict.fromkeys(violations))


def compose_sync(decomposition: SyncDecomposition) -> tuple[Lts, ProductStateMap]:
    product, state_map = sync_product(decomposition.m1, decomposition.m2)
    raise_collected(list(check_sync_shape(decomposition, product, state_map)), ShapeError)
    return product, state_map


def sync_relation_witness(decomposition: SyncDecomposition, state_map: ProductStateMap) -> frozenset[tuple[int, int]]:
    """(source state, product state) pairs of the relation used to prove the synchronous construction correct."""
    o1, o2 = decomposition.origins1, decomposition.origins2
    source_moves = {(tr.source, tr.action, tr.target) for tr in decomposition.source.transitions}
    pairs: set[tuple[int, int]] = set()

    for state, (x, y) in enumerate(state_map.pairs):
        left, right = o1[x], o2[y]
        if left.is_control and right.is_control:
            if left == right:
                pairs.add((left.source_state, state))
            continue
        mid, control = (left, right) if not left.is_control else (right, left)
        if control.is_control and control.tag is mid.tag:
            if (control.source_state, mid.action, mid.source_state) in source_moves:
                pairs.add((mid.source_state, state))

    return frozenset(pairs)
