from __future__ import annotations

import logging
from collections.abc import Iterable, Sequence

from ltsd.decomposition.asynchronous import decomp_a, flatten
from ltsd.decomposition.base import as_plain, restore_co_actions
from ltsd.decomposition.sync import decomp_s
from ltsd.errors import InvalidArgumentError, raise_collected
from ltsd.interfaces import Action, AlphabetPartition, Lts

logger = logging.getLogger(__name__)


def _label_sets(source: Lts, parts: Sequence[Iterable[str]]) -> list[frozenset[Action]]:
    sets = [frozenset(Action.parse(label) for label in part) for part in parts]
    errors: list[str] = []
    seen: set[Action] = set()
    for labels in sets:
        overlap = sorted(a.text for a in labels & seen)
        if overlap:
            errors.append(f"Label sets overlap on {', '.join(overlap)}.")
        seen |= labels
    missing = sorted(a.text for a in source.alphabet - seen)
    if missing:
        errors.append(f"Label sets do not cover: {', '.join(missing)}.")
    extra = sorted(a.text for a in seen - source.alphabet)
    if extra:
        errors.append(f"Label sets name labels outside the alphabet: {', '.join(extra)}.")
    raise_collected(errors)
    return sets


def decompose_recursive(
    source: Lts,
    parts: Sequence[Iterable[str]],
    mode: str = "sync",
    capacity: int | None = None,
) -> tuple[Lts, ...]:
    """Split ``source`` into one component per label set.

    The first set is split off, the remainder component is decomposed again over
    the next set and so on; synchronisation labels of earlier splits stay with the
    remainder. Only synchronous components can be split again, since queue
    components take internal steps; asynchronous mode therefore allows two sets.
    """
    sets = _label_sets(source, parts)
    if len(sets) < 2:
        return (source,)
    if mode == "async":
        if len(sets) > 2:
            raise InvalidArgumentError("Asynchronous decomposition splits into exactly two components.")
        decomposition = decomp_a(source, AlphabetPartition(sets[0], sets[1]), capacity)
        return flatten(decomposition.m1), flatten(decomposition.m2)
    if mode != "sync":
        raise InvalidArgumentError(f"Unknown decomposition mode '{mode}'.")

    components: list[Lts] = []
    remainder = source
    for number, labels in enumerate(sets[:-1]):
        plain = as_plain(remainder)
        partition = AlphabetPartition(labels, plain.alphabet - labels)
        decomposition = decomp_s(plain, partition)
        components.append(restore_co_actions(decomposition.m1))
        remainder = restore_co_actions(decomposition.m2)
        logger.debug("recursive split %d: remainder has %d states", number + 1, remainder.num_states)
    components.append(remainder)
    return tuple(components)
