from __future__ import annotations

from collections.abc import Iterable
from dataclasses import dataclass
from enum import Enum
from typing import Protocol

from ltsd.errors import InvalidArgumentError, raise_collected
from ltsd.interfaces import Action, ActionKind, AlphabetPartition, Lts, Transition
from ltsd.product import ProductStateMap
from ltsd.settings import load_settings

PLAIN_CO_PREFIX = "co:"


class ControlTag(Enum):
    """Which component holds the control token: up is the first component, down the second."""

    UP = "u"
    DOWN = "d"

    @property
    def other(self) -> ControlTag:
        return ControlTag.DOWN if self is ControlTag.UP else ControlTag.UP

    @property
    def offset(self) -> int:
        return 0 if self is ControlTag.UP else 1


def control_id(source_state: int, tag: ControlTag) -> int:
    """Control states of both components share the layout s_u = 2s, s_d = 2s + 1."""
    return 2 * source_state + tag.offset


@dataclass(frozen=True)
class StateOrigin:
    source_state: int
    tag: ControlTag
    action: Action | None = None

    @property
    def is_control(self) -> bool:
        return self.action is None

    def render(self, source_names: tuple[str, ...]) -> str:
        control = control_name(source_names[self.source_state], self.tag)
        if self.action is None:
            return control
        return f"t_{{{self.action.text},{control}}}"


def control_name(state_name: str, tag: ControlTag) -> str:
    return f"{state_name}{load_settings().decomposition.label_separator}{tag.value}"


def c_label(state_name: str, sender: ControlTag) -> str:
    """Synchronous token label c_{s_i,s_j} for passing control from ``sender`` to its peer."""
    return f"c_{{{control_name(state_name, sender)},{control_name(state_name, sender.other)}}}"


def async_c_label(state_name: str, sender: ControlTag) -> str:
    """Asynchronous token label c_{s_ij}."""
    return f"c_{{{state_name}{load_settings().decomposition.label_separator}{sender.value}{sender.other.value}}}"


def t_label(state_name: str, tag: ControlTag) -> str:
    return f"t_{{{control_name(state_name, tag)}}}"


class Decomposition(Protocol):
    partition: AlphabetPartition
    source: Lts

    def component_alphabets(self) -> tuple[frozenset[Action], frozenset[Action]]:
        ...

    def compose(self) -> tuple[Lts, ProductStateMap]:
        ...


def validate_source(lts: Lts, partition: AlphabetPartition) -> None:
    errors: list[str] = []
    if any(tr.action.is_internal for tr in lts.transitions):
        errors.append("The source LTS contains internal transitions; hide them before decomposing.")
    co_labels = sorted(a.text for a in lts.alphabet if a.kind is ActionKind.CO_VISIBLE)
    if co_labels:
        errors.append(f"The source LTS contains co-actions: {', '.join(co_labels)}.")
    missing = partition.missing_labels(lts.alphabet)
    if missing:
        errors.append(f"Partition does not cover labels: {', '.join(missing)}.")
    extra = sorted(a.text for a in partition.alphabet - lts.alphabet)
    if extra:
        errors.append(f"Partition names labels outside the alphabet: {', '.join(extra)}.")
    raise_collected(errors)


def check_label_collisions(user_labels: Iterable[Action], synthesised: Iterable[str]) -> None:
    user = {a.label for a in user_labels if a.label is not None}
    clashes = sorted(user & set(synthesised))
    if clashes:
        raise InvalidArgumentError(f"Source labels collide with synthesised labels: {', '.join(clashes)}.")


def check_alphabet_contract(
    partition: AlphabetPartition,
    first: frozenset[Action],
    second: frozenset[Action],
) -> tuple[str, ...]:
    """Violations of the general decomposition contract (empty when it holds)."""
    violations: list[str] = []
    if not partition.sigma1 <= first:
        violations.append("The first component does not carry all of sigma1.")
    if first & partition.sigma2:
        violations.append("The first component uses labels of sigma2.")
    if not partition.sigma2 <= second:
        violations.append("The second component does not carry all of sigma2.")
    if second & partition.sigma1:
        violations.append("The second component uses labels of sigma1.")
    return tuple(violations)


def as_plain(lts: Lts) -> Lts:
    """Rename every co-action to a plain label so that the system can be decomposed again."""

    def plain(action: Action) -> Action:
        if action.kind is ActionKind.CO_VISIBLE:
            return Action.visible(f"{PLAIN_CO_PREFIX}{action.label}")
        return action

    return Lts.build(
        num_states=lts.num_states,
        transitions=(Transition(tr.source, plain(tr.action), tr.target) for tr in lts.transitions),
        initial=lts.initial,
        alphabet=(plain(a) for a in lts.alphabet),
        names=lts.names,
    )


def restore_co_actions(lts: Lts) -> Lts:
    """Inverse of :func:`as_plain`."""

    def restore(action: Action) -> Action:
        if action.kind is ActionKind.VISIBLE and str(action.label).startswith(PLAIN_CO_PREFIX):
            return Action.co_visible(str(action.label)[len(PLAIN_CO_PREFIX):])
        return action

    return Lts.build(
        num_states=lts.num_states,
        transitions=(Transition(tr.source, restore(tr.action), tr.target) for tr in lts.transitions),
        initial=lts.initial,
        alphabet=(restore(a) for a in lts.alphabet),
        names=lts.names,
    )
