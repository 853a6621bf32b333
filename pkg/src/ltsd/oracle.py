"""Greatest-fixpoint reference checker for small instances.

Starts from the full relation on the disjoint union and deletes pairs that
violate the transfer clauses (and, when asked, the divergence clause) until
nothing changes. Quadratic memory; only meant to cross-check the refinement
checker in tests.
"""

from __future__ import annotations

import logging

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ltsd.equivalence import LEFT, RIGHT, EquivalenceResult, UnionState
from ltsd.errors import ResourceLimitError
from ltsd.interfaces import Action, Lts
from ltsd.lts import disjoint_union, divergent_among, tau_closure, tau_edges
from ltsd.settings import load_settings

logger = logging.getLogger(__name__)


def _closure_matrix(lts: Lts) -> np.ndarray:
    reach = np.zeros((lts.num_states, lts.num_states), dtype=np.int32)
    for state in range(lts.num_states):
        reach[state, list(tau_closure(lts, state))] = 1
    return reach


def _action_matrices(lts: Lts) -> dict[Action, np.ndarray]:
    matrices: dict[Action, np.ndarray] = {}
    for tr in lts.transitions:
        matrix = matrices.setdefault(tr.action, np.zeros((lts.num_states, lts.num_states), dtype=np.int32))
        matrix[tr.source, tr.target] = 1
    return matrices


def _transfer_ok(lts: Lts, relation: np.ndarray, reach: np.ndarray, steps: dict[Action, np.ndarray]) -> np.ndarray:
    """ok[s, t]: every move of s is answered by t under ``relation``."""
    ok = np.ones_like(relation, dtype=bool)
    rel = relation.astype(np.int32)
    for tr in lts.transitions:
        s, action, s_next = tr
        # t' with s R t' and t' -a-> t'' where s' R t''
        landing = (steps[action] @ rel[s_next]) > 0
        answer = (reach @ (relation[s] & landing).astype(np.int32)) > 0
        if action.is_internal:
            answer |= relation[s_next]
        ok[s] &= answer
    return ok


def _divergence_ok(lts: Lts, relation: np.ndarray) -> np.ndarray:
    """ok[s, t]: s can diverge staying related to t exactly when t can diverge staying related to s."""
    n = lts.num_states
    edges = tau_edges(lts)
    diverges = np.zeros((n, n), dtype=bool)
    for t in range(n):
        related = relation[:, t]
        inside = [(a, b) for a, b in edges if related[a] and related[b]]
        for s in divergent_among(n, inside):
            diverges[s, t] = True
    return diverges == diverges.T


def brute_force_bb(
    l1: Lts,
    l2: Lts,
    divergence_sensitive: bool = False,
    bound: int | None = None,
) -> EquivalenceResult:
    limit = load_settings().equivalence.oracle_state_bound if bound is None else bound
    if l1.num_states + l2.num_states > limit:
        raise ResourceLimitError(
            f"Oracle bound exceeded: {l1.num_states + l2.num_states} states > {limit}."
        )

    union = disjoint_union(l1, l2)
    offset = l1.num_states
    reach = _closure_matrix(union)
    steps = _action_matrices(union)
    relation = np.ones((union.num_states, union.num_states), dtype=bool)

    rounds = 0
    while True:
        rounds += 1
        ok = _transfer_ok(union, relation, reach, steps)
        updated = relation & ok & ok.T
        if divergence_sensitive and np.array_equal(updated, relation):
            updated &= _divergence_ok(union, relation)
        if np.array_equal(updated, relation):
            break
        relation = updated

    verdict = bool(relation[l1.initial, offset + l2.initial])
    logger.debug("oracle: %d rounds, %d related pairs, verdict %s", rounds, int(relation.sum()), verdict)
    if not verdict:
        return EquivalenceResult(verdict=False, divergence_sensitive=divergence_sensitive, rounds=rounds)

    _, labels = connected_components(csr_matrix(relation.astype(np.int8)), directed=False)
    grouped: dict[int, list[UnionState]] = {}
    for uid, label in enumerate(labels):
        member = UnionState(LEFT, uid) if uid < offset else UnionState(RIGHT, uid - offset)
        grouped.setdefault(int(label), []).append(member)
    return EquivalenceResult(
        verdict=True,
        divergence_sensitive=divergence_sensitive,
        blocks=tuple(tuple(members) for _, members in sorted(grouped.items())),
        rounds=rounds,
    )
