"""Branching bisimilarity and its divergence-preserving variant.

Both checkers run signature refinement on the disjoint union of the two
systems. A state's signature is the set of (action, target block) pairs it can
reach through internal steps that stay inside its own block, followed by one
step that is observable or leaves the block. In divergence-preserving mode the
signature also records whether the state can stay inside its block forever by
internal steps. Refinement stops once a round no longer splits any block.
"""

from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence
from dataclasses import dataclass
from typing import Any, NamedTuple

from ltsd.interfaces import Action, Lts
from ltsd.lts import disjoint_union, divergent_among, tau_closure, tau_edges
from ltsd.settings import load_settings

logger = logging.getLogger(__name__)

LEFT = "left"
RIGHT = "right"
DIVERGENCE_ACTION = "tau^omega"

Blocks = tuple[int, ...]
Signature = tuple[frozenset[tuple[Action, int]], bool]


class UnionState(NamedTuple):
    """A state of one of the two compared systems; ``state`` is the id inside that system."""

    side: str
    state: int


class CounterexampleStep(NamedTuple):
    left: int
    right: int
    action: str
    offered_by: str
    reason: str


@dataclass(frozen=True)
class EquivalenceResult:
    verdict: bool
    divergence_sensitive: bool
    blocks: tuple[tuple[UnionState, ...], ...] = ()
    counterexample: tuple[CounterexampleStep, ...] = ()
    rounds: int = 0

    def block_of(self, side: str, state: int) -> int | None:
        target = UnionState(side, state)
        for number, block in enumerate(self.blocks):
            if target in block:
                return number
        return None

    def to_json_dict(self, left: Lts | None = None, right: Lts | None = None) -> dict[str, Any]:
        def name(side: str, state: int) -> str:
            lts = left if side == LEFT else right
            return lts.state_name(state) if lts is not None else str(state)

        payload: dict[str, Any] = {
            "verdict": self.verdict,
            "divergence_sensitive": self.divergence_sensitive,
        }
        if self.verdict:
            payload["blocks"] = [[[member.side, name(*member)] for member in block] for block in self.blocks]
        else:
            payload["counterexample"] = [
                {
                    "left": name(LEFT, step.left),
                    "right": name(RIGHT, step.right),
                    "action": step.action,
                    "offered_by": step.offered_by,
                    "reason": step.reason,
                }
                for step in self.counterexample
            ]
        return payload


def _inert_closure(lts: Lts, blocks: Blocks, state: int) -> list[int]:
    """States reachable from ``state`` by internal steps that stay in its block, ``state`` first."""
    index = lts.index
    home = blocks[state]
    order = [state]
    seen = {state}
    for current in order:
        for action, target in index.outgoing(current):
            if action.is_internal and blocks[target] == home and target not in seen:
                seen.add(target)
                order.append(target)
    return order


def _block_divergent(lts: Lts, blocks: Blocks) -> frozenset[int]:
    inside = [(s, t) for s, t in tau_edges(lts) if blocks[s] == blocks[t]]
    return divergent_among(lts.num_states, inside)


def _signature(lts: Lts, blocks: Blocks, state: int, divergent: frozenset[int]) -> Signature:
    index = lts.index
    home = blocks[state]
    items: set[tuple[Action, int]] = set()
    for current in _inert_closure(lts, blocks, state):
        for action, target in index.outgoing(current):
            if action.is_internal and blocks[target] == home:
                continue
            items.add((action, blocks[target]))
    return frozenset(items), state in divergent


def _refine(lts: Lts, divergence_sensitive: bool) -> list[Blocks]:
    """Successive partitions, coarsest first; the last entry is stable."""
    blocks: Blocks = (0,) * lts.num_states
    history = [blocks]
    while True:
        divergent = _block_divergent(lts, blocks) if divergence_sensitive else frozenset()
        keys: dict[tuple[int, frozenset[tuple[Action, int]], bool], int] = {}
        refined = []
        for state in range(lts.num_states):
            items, flag = _signature(lts, blocks, state, divergent)
            refined.append(keys.setdefault((blocks[state], items, flag), len(keys)))
        if len(keys) == len(set(blocks)):
            return history
        blocks = tuple(refined)
        history.append(blocks)
        logger.debug("refinement round %d: %d blocks", len(history) - 1, len(keys))


def _separation_round(history: Sequence[Blocks], p: int, q: int) -> int:
    for round_number, blocks in enumerate(history):
        if blocks[p] != blocks[q]:
            return round_number
    raise ValueError("States share a block in the final partition.")


def _moves_with(lts: Lts, blocks: Blocks, state: int, action: Action) -> list[int]:
    """Targets of ``action`` taken after inert internal steps, excluding inert internal steps themselves."""
    home = blocks[state]
    targets = {
        target
        for current in _inert_closure(lts, blocks, state)
        for target in lts.index.successors(current, action)
        if not (action.is_internal and blocks[target] == home)
    }
    return sorted(targets)


def _counterexample(
    union: Lts,
    offset: int,
    right_initial: int,
    history: Sequence[Blocks],
    divergence_sensitive: bool,
    depth: int,
) -> tuple[CounterexampleStep, ...]:
    p, q = union.initial, offset + right_initial
    steps: list[CounterexampleStep] = []
    seen: set[tuple[int, int]] = set()

    while len(steps) < depth and (p, q) not in seen:
        seen.add((p, q))
        previous = history[_separation_round(history, p, q) - 1]
        divergent = _block_divergent(union, previous) if divergence_sensitive else frozenset()
        items_p, flag_p = _signature(union, previous, p, divergent)
        items_q, flag_q = _signature(union, previous, q, divergent)

        if flag_p != flag_q:
            offered_by = LEFT if flag_p else RIGHT
            steps.append(CounterexampleStep(p, q - offset, DIVERGENCE_ACTION, offered_by, "divergence"))
            break

        action, block = min(items_p ^ items_q, key=lambda item: (item[0].text, item[1]))
        from_left = (action, block) in items_p
        mover, other = (p, q) if from_left else (q, p)
        target = next(t for t in _moves_with(union, previous, mover, action) if previous[t] == block)
        answers = _moves_with(union, previous, other, action)
        offered_by = LEFT if from_left else RIGHT
        if not answers:
            steps.append(CounterexampleStep(p, q - offset, action.text, offered_by, "no-match"))
            break
        steps.append(CounterexampleStep(p, q - offset, action.text, offered_by, "mismatch"))
        p, q = (target, answers[0]) if from_left else (answers[0], target)

    return tuple(steps)


def _to_union_states(blocks: Blocks, offset: int) -> tuple[tuple[UnionState, ...], ...]:
    grouped: dict[int, list[UnionState]] = {}
    for state, block in enumerate(blocks):
        member = UnionState(LEFT, state) if state < offset else UnionState(RIGHT, state - offset)
        grouped.setdefault(block, []).append(member)
    return tuple(tuple(members) for _, members in sorted(grouped.items()))


def check_equivalence(l1: Lts, l2: Lts, divergence_sensitive: bool) -> EquivalenceResult:
    union = disjoint_union(l1, l2)
    offset = l1.num_states
    history = _refine(union, divergence_sensitive)
    final = history[-1]
    verdict = final[l1.initial] == final[offset + l2.initial]
    logger.debug(
        "%s check: %d blocks after %d rounds, verdict %s",
        "dpbb" if divergence_sensitive else "branching",
        len(set(final)),
        len(history) - 1,
        verdict,
    )
    if verdict:
        return EquivalenceResult(
            verdict=True,
            divergence_sensitive=divergence_sensitive,
            blocks=_to_union_states(final, offset),
            rounds=len(history) - 1,
        )

    steps = _counterexample(
        union,
        offset,
        l2.initial,
        history,
        divergence_sensitive,
        load_settings().equivalence.counterexample_depth,
    )
    return EquivalenceResult(
        verdict=False,
        divergence_sensitive=divergence_sensitive,
        counterexample=steps,
        rounds=len(history) - 1,
    )


def branching_bisim(l1: Lts, l2: Lts) -> EquivalenceResult:
    return check_equivalence(l1, l2, divergence_sensitive=False)


def dpbb(l1: Lts, l2: Lts) -> EquivalenceResult:
    return check_equivalence(l1, l2, divergence_sensitive=True)


def validate_witness(
    l1: Lts,
    l2: Lts,
    blocks: Iterable[Iterable[UnionState]],
    divergence_sensitive: bool = False,
) -> tuple[str, ...]:
    """Replay the transfer clauses (and optionally the divergence clause) on a block partition.

    Works from the definitions directly: full internal reachability, every pair of
    states in every block, no signatures. Returns the violations found.
    """
    union = disjoint_union(l1, l2)
    offset = l1.num_states
    violations: list[str] = []

    assignment: dict[int, int] = {}
    for number, block in enumerate(blocks):
        for side, state in block:
            uid = state if side == LEFT else offset + state
            if uid in assignment:
                violations.append(f"{side} state {state} appears in more than one block.")
            assignment[uid] = number
    missing = [uid for uid in range(union.num_states) if uid not in assignment]
    if missing:
        violations.append(f"{len(missing)} states are not covered by any block.")
        return tuple(dict.fromkeys(violations))

    def label(uid: int) -> str:
        return union.state_name(uid)

    members: dict[int, list[int]] = {}
    for uid in range(union.num_states):
        members.setdefault(assignment[uid], []).append(uid)

    index = union.index
    # answers[t]: (block of t', action, block of t'') for t -tau*-> t' -action-> t''
    answers: list[set[tuple[int, Action, int]]] = []
    for uid in range(union.num_states):
        answers.append(
            {
                (assignment[t_mid], action, assignment[t_next])
                for t_mid in tau_closure(union, uid)
                for action, t_next in index.outgoing(t_mid)
            }
        )
    for group in members.values():
        for s in group:
            for action, s_next in index.outgoing(s):
                wanted = (assignment[s], action, assignment[s_next])
                for t in group:
                    if action.is_internal and assignment[s_next] == assignment[t]:
                        continue
                    if wanted not in answers[t]:
                        violations.append(
                            f"{label(t)} cannot match {label(s)} -{action}-> {label(s_next)} within the partition."
                        )

    if divergence_sensitive:
        inside = [(s, t) for s, t in tau_edges(union) if assignment[s] == assignment[t]]
        divergent = divergent_among(union.num_states, inside)
        for group in members.values():
            flags = {uid in divergent for uid in group}
            if len(flags) > 1:
                names = ", ".join(label(uid) for uid in group)
                violations.append(f"Block {{{names}}} mixes divergent and non-divergent states.")

    return tuple(dict.fromkeys(violations))


def pairs_outside_blocks(result: EquivalenceResult, pairs: Iterable[tuple[int, int]]) -> tuple[tuple[int, int], ...]:
    """(left state, right state) pairs that the result's partition does not relate."""
    return tuple(
        sorted(
            (left, right)
            for left, right in pairs
            if result.block_of(LEFT, left) is None or result.block_of(LEFT, left) != result.block_of(RIGHT, right)
        )
    )
