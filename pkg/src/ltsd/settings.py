from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Any

import pandas as pd
import yaml

from ltsd.paths import settings_file


@dataclass(frozen=True)
class SettingRecord:
    key: str
    value: Any
    units: str
    definition: str
    description: str
    reference: str
    source_type: str
    source_id: str


@dataclass(frozen=True)
class DecompositionSettings:
    default_queue_capacity: int
    label_separator: str


@dataclass(frozen=True)
class EquivalenceSettings:
    oracle_state_bound: int
    counterexample_depth: int


@dataclass(frozen=True)
class GeneratorSettings:
    default_states: int
    default_actions: int
    default_density: float
    default_seed: int


@dataclass(frozen=True)
class HarnessSettings:
    property_seeds: int
    factor_pairs: int
    oracle_pairs: int
    oracle_max_states: int
    max_states: int
    max_actions: int


@dataclass(frozen=True)
class LtsdSettings:
    decomposition: DecompositionSettings
    equivalence: EquivalenceSettings
    generator: GeneratorSettings
    harness: HarnessSettings
    records: dict[str, SettingRecord]


@lru_cache(maxsize=1)
def _payload() -> dict[str, Any]:
    return yaml.safe_load(settings_file().read_text())


def _node_at_path(parameters: dict[str, Any], path: str) -> dict[str, Any]:
    cursor: Any = parameters
    for part in path.split("."):
        cursor = cursor[part]
    if not isinstance(cursor, dict):
        raise ValueError(f"Setting path '{path}' did not resolve to a mapping node.")
    return cursor


def _record(parameters: dict[str, Any], path: str, records: dict[str, SettingRecord]) -> Any:
    node = _node_at_path(parameters, path)
    records[path] = SettingRecord(
        key=path,
        value=node["value"],
        units=str(node.get("units", "")),
        definition=str(node.get("definition", "")),
        description=str(node.get("description", "")),
        reference=str(node.get("reference", "")),
        source_type=str(node.get("source_type", "")),
        source_id=str(node.get("source_id", "")),
    )
    return node["value"]


@lru_cache(maxsize=1)
def load_settings() -> LtsdSettings:
    params = _payload().get("parameters", {})
    records: dict[str, SettingRecord] = {}

    decomposition = DecompositionSettings(
        default_queue_capacity=int(_record(params, "decomposition.default_queue_capacity", records)),
        label_separator=str(_record(params, "decomposition.label_separator", records)),
    )

    equivalence = EquivalenceSettings(
        oracle_state_bound=int(_record(params, "equivalence.oracle_state_bound", records)),
        counterexample_depth=int(_record(params, "equivalence.counterexample_depth", records)),
    )

    generator = GeneratorSettings(
        default_states=int(_record(params, "generator.default_states", records)),
        default_actions=int(_record(params, "generator.default_actions", records)),
        default_density=float(_record(params, "generator.default_density", records)),
        default_seed=int(_record(params, "generator.default_seed", records)),
    )

    harness = HarnessSettings(
        property_seeds=int(_record(params, "harness.property_seeds", records)),
        factor_pairs=int(_record(params, "harness.factor_pairs", records)),
        oracle_pairs=int(_record(params, "harness.oracle_pairs", records)),
        oracle_max_states=int(_record(params, "harness.oracle_max_states", records)),
        max_states=int(_record(params, "harness.max_states", records)),
        max_actions=int(_record(params, "harness.max_actions", records)),
    )

    if decomposition.default_queue_capacity < 1:
        raise ValueError("decomposition.default_queue_capacity must be at least 1.")

    return LtsdSettings(
        decomposition=decomposition,
        equivalence=equivalence,
        generator=generator,
        harness=harness,
        records=records,
    )


def settings_catalog_df() -> pd.DataFrame:
    settings = load_settings()
    rows = [
        {
            "key": record.key,
            "value": record.value,
            "units": record.units,
            "definition": record.definition,
            "description": record.description,
            "reference": record.reference,
            "source_type": record.source_type,
            "source_id": record.source_id,
        }
        for record in settings.records.values()
    ]
    return pd.DataFrame(rows)
