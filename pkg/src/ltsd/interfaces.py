from __future__ import annotations

from collections import Counter
from collections.abc import Iterable
from dataclasses import dataclass, field
from enum import IntEnum
from functools import cached_property
from typing import NamedTuple

from ltsd.errors import InvalidArgumentError, raise_collected

TAU_TEXT = "tau"
TAU_ALIASES = frozenset({"tau", "i"})
CO_PREFIX = "!"


class ActionKind(IntEnum):
    INTERNAL = 0
    VISIBLE = 1
    CO_VISIBLE = 2


@dataclass(frozen=True, order=True)
class Action:
    kind: ActionKind
    label: str | None = None

    def __post_init__(self) -> None:
        if self.kind is ActionKind.INTERNAL:
            if self.label is not None:
                raise InvalidArgumentError("The internal action carries no label.")
            return
        if not self.label:
            raise InvalidArgumentError("Visible actions need a nonempty label.")
        if self.label.startswith(CO_PREFIX):
            raise InvalidArgumentError(f"Label '{self.label}' may not start with '{CO_PREFIX}'.")
        if self.label in TAU_ALIASES:
            raise InvalidArgumentError(f"Label '{self.label}' is reserved for the internal action.")
        if '"' in self.label or "\n" in self.label:
            raise InvalidArgumentError(f"Label {self.label!r} contains a quote or newline.")

    @classmethod
    def visible(cls, label: str) -> Action:
        return cls(ActionKind.VISIBLE, label)

    @classmethod
    def co_visible(cls, label: str) -> Action:
        return cls(ActionKind.CO_VISIBLE, label)

    @classmethod
    def parse(cls, text: str) -> Action:
        if text in TAU_ALIASES:
            return TAU
        if text.startswith(CO_PREFIX):
            return cls.co_visible(text[len(CO_PREFIX):])
        return cls.visible(text)

    @property
    def is_internal(self) -> bool:
        return self.kind is ActionKind.INTERNAL

    @property
    def text(self) -> str:
        if self.kind is ActionKind.INTERNAL:
            return TAU_TEXT
        if self.kind is ActionKind.CO_VISIBLE:
            return f"{CO_PREFIX}{self.label}"
        return str(self.label)

    def co(self) -> Action:
        if self.kind is ActionKind.INTERNAL:
            raise InvalidArgumentError("The internal action has no co-action.")
        flipped = ActionKind.CO_VISIBLE if self.kind is ActionKind.VISIBLE else ActionKind.VISIBLE
        return Action(flipped, self.label)

    def __str__(self) -> str:
        return self.text


TAU = Action(ActionKind.INTERNAL)


class Transition(NamedTuple):
    source: int
    action: Action
    target: int

    def sort_key(self) -> tuple[int, str, int]:
        return (self.source, self.action.text, self.target)


@dataclass(frozen=True)
class TransitionIndex:
    """Forward and backward adjacency per state, grouped by action."""

    forward: tuple[dict[Action, tuple[int, ...]], ...]
    backward: tuple[dict[Action, tuple[int, ...]], ...]

    @classmethod
    def build(cls, num_states: int, transitions: Iterable[Transition]) -> TransitionIndex:
        forward: list[dict[Action, list[int]]] = [{} for _ in range(num_states)]
        backward: list[dict[Action, list[int]]] = [{} for _ in range(num_states)]
        for tr in sorted(transitions, key=Transition.sort_key):
            forward[tr.source].setdefault(tr.action, []).append(tr.target)
            backward[tr.target].setdefault(tr.action, []).append(tr.source)
        return cls(
            forward=tuple({a: tuple(ts) for a, ts in row.items()} for row in forward),
            backward=tuple({a: tuple(ss) for a, ss in row.items()} for row in backward),
        )

    def successors(self, state: int, action: Action) -> tuple[int, ...]:
        return self.forward[state].get(action, ())

    def predecessors(self, state: int, action: Action) -> tuple[int, ...]:
        return self.backward[state].get(action, ())

    def outgoing(self, state: int) -> list[tuple[Action, int]]:
        return [(action, target) for action, targets in self.forward[state].items() for target in targets]

    def transitions(self) -> frozenset[Transition]:
        return frozenset(
            Transition(source, action, target)
            for source, row in enumerate(self.forward)
            for action, targets in row.items()
            for target in targets
        )


@dataclass(frozen=True)
class Lts:
    num_states: int
    alphabet: frozenset[Action]
    transitions: frozenset[Transition]
    initial: int = 0
    # Display-only side table; never part of equality.
    names: tuple[str, ...] | None = field(default=None, compare=False)

    def __post_init__(self) -> None:
        errors: list[str] = []
        if self.num_states < 1:
            errors.append("An LTS needs at least one state.")
        if not 0 <= self.initial < max(self.num_states, 1):
            errors.append(f"Initial state {self.initial} is out of range.")
        if TAU in self.alphabet:
            errors.append("The internal action may not be part of the alphabet.")
        for tr in self.transitions:
            if not (0 <= tr.source < self.num_states and 0 <= tr.target < self.num_states):
                errors.append(f"Transition {tr.source} -{tr.action}-> {tr.target} has an endpoint out of range.")
            if not tr.action.is_internal and tr.action not in self.alphabet:
                errors.append(f"Label '{tr.action}' is used by a transition but missing from the alphabet.")
        if self.names is not None and len(self.names) != self.num_states:
            errors.append("The state name table must have one entry per state.")
        if self.names is not None:
            repeated = sorted(name for name, count in Counter(self.names).items() if count > 1)
            if repeated:
                errors.append(f"State names must be unique; repeated: {', '.join(repeated)}.")
        raise_collected(errors)

    @classmethod
    def build(
        cls,
        num_states: int,
        transitions: Iterable[tuple[int, Action, int]],
        initial: int = 0,
        alphabet: Iterable[Action] = (),
        names: Iterable[str] | None = None,
    ) -> Lts:
        trs = frozenset(Transition(s, a, t) for s, a, t in transitions)
        labels = set(alphabet) | {tr.action for tr in trs if not tr.action.is_internal}
        return cls(
            num_states=num_states,
            alphabet=frozenset(labels),
            transitions=trs,
            initial=initial,
            names=tuple(names) if names is not None else None,
        )

    @cached_property
    def index(self) -> TransitionIndex:
        return TransitionIndex.build(self.num_states, self.transitions)

    def sorted_transitions(self) -> list[Transition]:
        return sorted(self.transitions, key=Transition.sort_key)

    def state_name(self, state: int) -> str:
        if self.names is None:
            return str(state)
        return self.names[state]

    @property
    def display_names(self) -> tuple[str, ...]:
        return self.names if self.names is not None else tuple(str(s) for s in range(self.num_states))

    def labels(self) -> frozenset[str]:
        return frozenset(action.text for action in self.alphabet)


@dataclass(frozen=True)
class AlphabetPartition:
    sigma1: frozenset[Action]
    sigma2: frozenset[Action]

    def __post_init__(self) -> None:
        errors: list[str] = []
        overlap = sorted(a.text for a in self.sigma1 & self.sigma2)
        if overlap:
            errors.append(f"Partition halves overlap on {', '.join(overlap)}.")
        for action in self.sigma1 | self.sigma2:
            if action.kind is ActionKind.INTERNAL:
                errors.append("The internal action may not appear in a partition.")
            elif action.kind is ActionKind.CO_VISIBLE:
                errors.append(f"Co-action '{action}' may not appear in a partition.")
        raise_collected(errors)

    @classmethod
    def from_labels(cls, sigma1: Iterable[str], sigma2: Iterable[str]) -> AlphabetPartition:
        return cls(
            sigma1=frozenset(Action.parse(label) for label in sigma1),
            sigma2=frozenset(Action.parse(label) for label in sigma2),
        )

    @property
    def alphabet(self) -> frozenset[Action]:
        return self.sigma1 | self.sigma2

    def missing_labels(self, alphabet: Iterable[Action]) -> tuple[str, ...]:
        return tuple(sorted(a.text for a in set(alphabet) - self.alphabet))

    def validate_against(self, alphabet: Iterable[Action]) -> None:
        alphabet = frozenset(alphabet)
        errors: list[str] = []
        missing = self.missing_labels(alphabet)
        if missing:
            errors.append(f"Partition does not cover labels: {', '.join(missing)}.")
        extra = sorted(a.text for a in self.alphabet - alphabet)
        if extra:
            errors.append(f"Partition names labels outside the alphabet: {', '.join(extra)}.")
        raise_collected(errors)

    def side_of(self, action: Action) -> int:
        if action in self.sigma1:
            return 1
        if action in self.sigma2:
            return 2
        raise InvalidArgumentError(f"Label '{action}' is not in the partition.")
