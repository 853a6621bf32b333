from __future__ import annotations

from ltsd.decomposition.asynchronous import (
    AsyncDecomposition,
    QueueLts,
    async_relation_witness,
    check_async_shape,
    compose_async,
    decomp_a,
    flatten,
    queue_lengths,
)
from ltsd.decomposition.base import Decomposition, StateOrigin, check_alphabet_contract
from ltsd.decomposition.recursive import decompose_recursive
from ltsd.decomposition.sync import SyncDecomposition, check_sync_shape, compose_sync, decomp_s, sync_relation_witness
from ltsd.product import ProductStateMap


def relation_witness(
    decomposition: SyncDecomposition | AsyncDecomposition,
    state_map: ProductStateMap,
) -> frozenset[tuple[int, int]]:
    if isinstance(decomposition, SyncDecomposition):
        return sync_relation_witness(decomposition, state_map)
    return async_relation_witness(decomposition, state_map)


__all__ = [
    "AsyncDecomposition",
    "Decomposition",
    "QueueLts",
    "StateOrigin",
    "SyncDecomposition",
    "check_alphabet_contract",
    "check_async_shape",
    "check_sync_shape",
    "compose_async",
    "compose_sync",
    "decomp_a",
    "decomp_s",
    "decompose_recursive",
    "flatten",
    "queue_lengths",
    "relation_witness",
]
