from __future__ import annotations

from collections import deque
from collections.abc import Iterable

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import connected_components

from ltsd.interfaces import TAU, Action, Lts, Transition


def co_action(action: Action) -> Action:
    return action.co()


def co_set(actions: Iterable[Action]) -> frozenset[Action]:
    return frozenset(a.co() for a in actions if not a.is_internal)


def tau_edges(lts: Lts) -> list[tuple[int, int]]:
    return sorted((tr.source, tr.target) for tr in lts.transitions if tr.action.is_internal)


def tau_closure(lts: Lts, state: int) -> frozenset[int]:
    """States reachable from ``state`` by zero or more internal steps."""
    if not 0 <= state < lts.num_states:
        raise ValueError(f"State {state} is out of range.")
    index = lts.index
    seen = {state}
    stack = [state]
    while stack:
        current = stack.pop()
        for nxt in index.successors(current, TAU):
            if nxt not in seen:
                seen.add(nxt)
                stack.append(nxt)
    return frozenset(seen)


def cyclic_states(num_states: int, edges: Iterable[tuple[int, int]]) -> frozenset[int]:
    """States lying on a cycle of the directed graph given by ``edges``."""
    edge_list = list(edges)
    if not edge_list:
        return frozenset()
    sources = np.fromiter((s for s, _ in edge_list), dtype=np.int64, count=len(edge_list))
    targets = np.fromiter((t for _, t in edge_list), dtype=np.int64, count=len(edge_list))
    graph = csr_matrix((np.ones(len(edge_list), dtype=np.int8), (sources, targets)), shape=(num_states, num_states))
    _, labels = connected_components(graph, directed=True, connection="strong")

    component_sizes = np.bincount(labels, minlength=labels.max() + 1)
    cyclic = {int(s) for s in range(num_states) if component_sizes[labels[s]] > 1}
    cyclic.update(int(s) for s, t in edge_list if s == t)
    return frozenset(cyclic)


def divergent_among(num_states: int, edges: Iterable[tuple[int, int]]) -> frozenset[int]:
    """States with an infinite path over ``edges``: those reaching a cycle."""
    edge_list = list(edges)
    cyclic = cyclic_states(num_states, edge_list)
    if not cyclic:
        return frozenset()

    predecessors: list[list[int]] = [[] for _ in range(num_states)]
    for s, t in edge_list:
        predecessors[t].append(s)

    divergent = set(cyclic)
    queue = deque(cyclic)
    while queue:
        current = queue.popleft()
        for prev in predecessors[current]:
            if prev not in divergent:
                divergent.add(prev)
                queue.append(prev)
    return frozenset(divergent)


def divergent_states(lts: Lts) -> frozenset[int]:
    return divergent_among(lts.num_states, tau_edges(lts))


def reachable_states(lts: Lts) -> list[int]:
    """States reachable from the initial state, in breadth-first order."""
    index = lts.index
    order = [lts.initial]
    seen = {lts.initial}
    queue = deque(order)
    while queue:
        current = queue.popleft()
        for _, target in index.outgoing(current):
            if target not in seen:
                seen.add(target)
                order.append(target)
                queue.append(target)
    return order


def disjoint_union(left: Lts, right: Lts) -> Lts:
    """Both systems side by side; right-hand states are shifted by ``left.num_states``."""
    offset = left.num_states
    transitions = set(left.transitions)
    transitions.update(Transition(tr.source + offset, tr.action, tr.target + offset) for tr in right.transitions)
    names = tuple(f"L:{n}" for n in left.display_names) + tuple(f"R:{n}" for n in right.display_names)
    return Lts(
        num_states=left.num_states + right.num_states,
        alphabet=left.alphabet | right.alphabet,
        transitions=frozenset(transitions),
        initial=left.initial,
        names=names,
    )
