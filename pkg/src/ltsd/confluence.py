from __future__ import annotations

import logging
from collections.abc import Iterable
from dataclasses import asdict, dataclass
from typing import Any, NamedTuple

import pandas as pd

from ltsd.decomposition.asynchronous import decomp_a, flatten
from ltsd.decomposition.sync import decomp_s
from ltsd.equivalence import branching_bisim, dpbb
from ltsd.errors import InvalidArgumentError
from ltsd.examples import choice_example, choice_partition
from ltsd.interfaces import Action, Lts
from ltsd.lts import co_set, divergent_states

logger = logging.getLogger(__name__)


class ConfluenceViolation(NamedTuple):
    state: int
    first: Action
    second: Action
    first_target: int
    second_target: int


@dataclass(frozen=True)
class ConfluenceReport:
    violations: tuple[ConfluenceViolation, ...]

    @property
    def verdict(self) -> bool:
        return not self.violations

    def to_json_dict(self, lts: Lts | None = None) -> dict[str, Any]:
        def name(state: int) -> str:
            return lts.state_name(state) if lts is not None else str(state)

        return {
            "verdict": self.verdict,
            "violations": [
                {
                    "state": name(v.state),
                    "a": v.first.text,
                    "b": v.second.text,
                    "state_a": name(v.first_target),
                    "state_b": name(v.second_target),
                }
                for v in self.violations
            ],
        }


def is_confluent(lts: Lts, first: Iterable[Action], second: Iterable[Action]) -> ConfluenceReport:
    """Every a/b fork from a common state closes: s_b -a-> s_c and s_a -b-> s_c for some s_c."""
    first, second = frozenset(first), frozenset(second)
    overlap = sorted(a.text for a in first & second)
    if overlap:
        raise InvalidArgumentError(f"Confluence action sets overlap on {', '.join(overlap)}.")

    index = lts.index
    violations: list[ConfluenceViolation] = []
    for state in range(lts.num_states):
        moves = index.outgoing(state)
        for a, s_a in moves:
            if a not in first:
                continue
            for b, s_b in moves:
                if b not in second:
                    continue
                closing = set(index.successors(s_b, a)) & set(index.successors(s_a, b))
                if not closing:
                    violations.append(ConfluenceViolation(state, a, b, s_a, s_b))
    violations.sort(key=lambda v: (v.state, v.first.text, v.second.text, v.first_target, v.second_target))
    return ConfluenceReport(violations=tuple(violations))


def factor_sets(left: frozenset[Action], right: frozenset[Action]) -> tuple[frozenset[Action], frozenset[Action]]:
    """The label sets a product of factors with these alphabets is confluent over."""
    return left - co_set(right), right - co_set(left)


@dataclass(frozen=True)
class DemoRow:
    pipeline: str
    capacity: int | None
    product_states: int
    product_transitions: int
    branching_bisimilar: bool
    divergence_preserving: bool
    divergent_states: int
    product_confluent: bool


@dataclass(frozen=True)
class DemoReport:
    source: Lts
    source_divergent: frozenset[int]
    source_confluence: ConfluenceReport
    rows: tuple[DemoRow, ...]

    @property
    def holds(self) -> bool:
        """Every pipeline keeps branching bisimilarity but loses divergence preservation."""
        return (
            not self.source_divergent
            and not self.source_confluence.verdict
            and all(
                row.branching_bisimilar and not row.divergence_preserving and row.divergent_states > 0
                for row in self.rows
            )
        )

    def to_frame(self) -> pd.DataFrame:
        return pd.DataFrame([asdict(row) for row in self.rows])

    def to_json_dict(self) -> dict[str, Any]:
        return {
            "source_divergent_states": len(self.source_divergent),
            "source_confluence": self.source_confluence.to_json_dict(self.source),
            "pipelines": [asdict(row) for row in self.rows],
            "holds": self.holds,
        }

    def render_text(self) -> str:
        lines = [
            f"source: {self.source.num_states} states, {len(self.source_divergent)} divergent",
            f"source confluent over {{a}}/{{b}}: {self.source_confluence.verdict}",
        ]
        for v in self.source_confluence.violations:
            names = self.source.display_names
            lines.append(
                f"  violation: {names[v.state]} -{v.first}-> {names[v.first_target]}, "
                f"{names[v.state]} -{v.second}-> {names[v.second_target]}"
            )
        lines.append(self.to_frame().to_string(index=False))
        lines.append(f"branching bisimilar but not divergence preserving everywhere: {self.holds}")
        return "\n".join(lines) + "\n"


def dpbb_impossibility_demo(capacities: Iterable[int] = (1,)) -> DemoReport:
    source, partition = choice_example(), choice_partition()
    rows: list[DemoRow] = []

    sync = decomp_s(source, partition)
    product, _ = sync.compose()
    rows.append(_demo_row("sync", None, source, product, sync.m1.alphabet, sync.m2.alphabet))

    for capacity in capacities:
        asynchronous = decomp_a(source, partition, capacity)
        product, _ = asynchronous.compose()
        left, right = flatten(asynchronous.m1), flatten(asynchronous.m2)
        rows.append(_demo_row("async", capacity, source, product, left.alphabet, right.alphabet))

    report = DemoReport(
        source=source,
        source_divergent=divergent_states(source),
        source_confluence=is_confluent(source, partition.sigma1, partition.sigma2),
        rows=tuple(rows),
    )
    logger.debug("impossibility demo over %d pipelines: holds=%s", len(rows), report.holds)
    return report


def _demo_row(
    pipeline: str,
    capacity: int | None,
    source: Lts,
    product: Lts,
    left: frozenset[Action],
    right: frozenset[Action],
) -> DemoRow:
    return DemoRow(
        pipeline=pipeline,
        capacity=capacity,
        product_states=product.num_states,
        product_transitions=len(product.transitions),
        branching_bisimilar=branching_bisim(source, product).verdict,
        divergence_preserving=dpbb(source, product).verdict,
        divergent_states=len(divergent_states(product)),
        product_confluent=is_confluent(product, *factor_sets(left, right)).verdict,
    )
