"""``ltsd`` command line: decompose, compose, check, confluence, demo-dpbb, generate.

Exit codes: 0 success / equivalent / confluent, 1 inequivalent / not confluent,
2 usage, input or validation errors.
"""

from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from collections.abc import Callable, Sequence
from pathlib import Path
from typing import Any, Literal

import yaml
from pydantic import BaseModel, ConfigDict, Field, ValidationError, model_validator

from ltsd import __version__
from ltsd.aut import read_aut_file, write_aut, write_aut_file
from ltsd.confluence import dpbb_impossibility_demo, is_confluent
from ltsd.decomposition import compose_async, compose_sync, decomp_a, decomp_s, flatten
from ltsd.equivalence import check_equivalence
from ltsd.errors import InvalidArgumentError, LtsdError, ShapeError
from ltsd.generator import generate_lts
from ltsd.interfaces import Action, AlphabetPartition, Lts
from ltsd.product import product_warnings
from ltsd.settings import load_settings

logger = logging.getLogger(__name__)

MANIFEST_NAME = "manifest.json"
Command = Literal["decompose", "compose", "check", "confluence", "demo-dpbb", "generate"]


class RunConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    command: Command
    inputs: tuple[Path, ...] = ()
    mode: Literal["sync", "async"] = "sync"
    sigma1: tuple[str, ...] | None = None
    sigma2: tuple[str, ...] | None = None
    partition_file: Path | None = None
    capacity: int | None = Field(default=None, ge=1)
    divergence: bool = False
    out: Path | None = None
    json_output: bool = False
    seed: int = 0
    states: int | None = Field(default=None, ge=1)
    actions: int | None = Field(default=None, ge=0)
    density: float | None = Field(default=None, ge=0.0, le=1.0)

    @model_validator(mode="after")
    def _check_consistency(self) -> RunConfig:
        errors: list[str] = []
        if (self.sigma1 is None) != (self.sigma2 is None):
            errors.append("--sigma1 and --sigma2 must be given together")
        if self.sigma1 is not None and self.partition_file is not None:
            errors.append("give either --sigma1/--sigma2 or --partition, not both")
        if self.sigma1 is not None and self.sigma2 is not None:
            overlap = sorted(set(self.sigma1) & set(self.sigma2))
            if overlap:
                errors.append(f"partition lists overlap on {', '.join(overlap)}")
        for path in (*self.inputs, *([self.partition_file] if self.partition_file else [])):
            if not path.is_file():
                errors.append(f"file not found: {path}")
        if errors:
            raise ValueError("; ".join(dict.fromkeys(errors)))
        return self

    def label_lists(self) -> tuple[tuple[str, ...], tuple[str, ...]] | None:
        if self.partition_file is not None:
            payload = yaml.safe_load(self.partition_file.read_text(encoding="utf-8")) or {}
            if not isinstance(payload, dict):
                raise InvalidArgumentError(f"Partition file {self.partition_file} must hold a mapping.")
            return (
                tuple(str(label) for label in payload.get("sigma1") or ()),
                tuple(str(label) for label in payload.get("sigma2") or ()),
            )
        if self.sigma1 is None or self.sigma2 is None:
            return None
        return self.sigma1, self.sigma2

    def partition(self) -> AlphabetPartition:
        lists = self.label_lists()
        if lists is None:
            raise InvalidArgumentError(f"{self.command} needs --sigma1/--sigma2 or --partition.")
        return AlphabetPartition.from_labels(*lists)


class DecompositionManifest(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: Literal["sync", "async"]
    sigma1: list[str]
    sigma2: list[str]
    capacity: int | None = None
    source: str
    m1: str = "m1.aut"
    m2: str = "m2.aut"

    @classmethod
    def load(cls, path: Path) -> DecompositionManifest:
        return cls.model_validate_json(Path(path).read_text(encoding="utf-8"))


def _label_list(text: str) -> tuple[str, ...]:
    return tuple(part.strip() for part in text.split(",") if part.strip())


def _use_color() -> bool:
    setting = os.getenv("LTSD_COLOR")
    if setting is not None:
        return setting.strip() == "1"
    return sys.stdout.isatty()


def _paint(text: str, ok: bool) -> str:
    if not _use_color():
        return text
    return f"\033[{32 if ok else 31}m{text}\033[0m"


def _emit_json(payload: dict[str, Any]) -> None:
    print(json.dumps(payload, indent=2))


def _warn(messages: Sequence[str]) -> None:
    for message in messages:
        print(f"warning: {message}", file=sys.stderr)


def _recompose(path: Path) -> Lts:
    """Rebuild the decomposition a manifest records, compose it and check the stored components against it."""
    manifest = DecompositionManifest.load(path)
    source_path = Path(manifest.source)
    if not source_path.is_absolute() and not source_path.is_file():
        source_path = path.parent / source_path
    source = read_aut_file(source_path)
    partition = AlphabetPartition.from_labels(manifest.sigma1, manifest.sigma2)
    if manifest.mode == "sync":
        decomposition = decomp_s(source, partition)
        expected = (decomposition.m1, decomposition.m2)
        product, _ = compose_sync(decomposition)
    else:
        asynchronous = decomp_a(source, partition, manifest.capacity)
        expected = (flatten(asynchronous.m1), flatten(asynchronous.m2))
        product, _ = compose_async(asynchronous)

    for filename, rebuilt in zip((manifest.m1, manifest.m2), expected):
        stored = read_aut_file(path.parent / filename)
        if (stored.num_states, stored.initial, stored.transitions) != (
            rebuilt.num_states,
            rebuilt.initial,
            rebuilt.transitions,
        ):
            raise ShapeError(f"{filename} does not match the decomposition of {source_path}.")
    _warn(product_warnings(*expected))
    logger.debug("recomposed %s: %d product states", path, product.num_states)
    return product


def _load_compared(path: Path) -> Lts:
    """An .aut file, or the recomposed product when ``path`` is a decomposition manifest."""
    if path.suffix == ".json":
        return _recompose(path)
    return read_aut_file(path)



def cmd_decompose(cfg: RunConfig) -> int:
    source = read_aut_file(cfg.inputs[0])
    partition = cfg.partition()
    if cfg.mode == "sync":
        decomposition = decomp_s(source, partition)
        m1, m2 = decomposition.m1, decomposition.m2
        capacity = None
    else:
        capacity = cfg.capacity or load_settings().decomposition.default_queue_capacity
        asynchronous = decomp_a(source, partition, capacity)
        m1, m2 = flatten(asynchronous.m1), flatten(asynchronous.m2)

    out = cfg.out or Path(".")
    write_aut_file(m1, out / "m1.aut")
    write_aut_file(m2, out / "m2.aut")
    manifest = DecompositionManifest(
        mode=cfg.mode,
        sigma1=sorted(a.text for a in partition.sigma1),
        sigma2=sorted(a.text for a in partition.sigma2),
        capacity=capacity,
        source=str(cfg.inputs[0].resolve()),
    )
    (out / MANIFEST_NAME).write_text(manifest.model_dump_json(indent=2) + "\n", encoding="utf-8")

    if cfg.json_output:
        _emit_json(
            {
                "manifest": str(out / MANIFEST_NAME),
                "m1": {"states": m1.num_states, "transitions": len(m1.transitions)},
                "m2": {"states": m2.num_states, "transitions": len(m2.transitions)},
            }
        )
    else:
        print(f"Wrote {out / 'm1.aut'} ({m1.num_states} states, {len(m1.transitions)} transitions)")
        print(f"Wrote {out / 'm2.aut'} ({m2.num_states} states, {len(m2.transitions)} transitions)")
        print(f"Wrote {out / MANIFEST_NAME}")
    return 0


def cmd_compose(cfg: RunConfig) -> int:
    manifest_path = cfg.inputs[0]
    product = _load_compared(manifest_path)
    out = cfg.out or manifest_path.parent
    write_aut_file(product, out / "product.aut")
    if cfg.json_output:
        _emit_json({"product": str(out / "product.aut"), "states": product.num_states, "transitions": len(product.transitions)})
    else:
        print(f"Wrote {out / 'product.aut'} ({product.num_states} states, {len(product.transitions)} transitions)")
    return 0


def cmd_check(cfg: RunConfig) -> int:
    if len(cfg.inputs) != 2:
        raise InvalidArgumentError("check compares exactly two inputs.")
    left, right = _load_compared(cfg.inputs[0]), _load_compared(cfg.inputs[1])
    result = check_equivalence(left, right, cfg.divergence)
    if cfg.json_output:
        _emit_json(result.to_json_dict(left, right))
    else:
        relation = "divergence-preserving branching bisimilar" if cfg.divergence else "branching bisimilar"
        if result.verdict:
            print(_paint(f"{relation}: yes ({len(result.blocks)} blocks)", ok=True))
        else:
            print(_paint(f"{relation}: no", ok=False))
            for step in result.counterexample:
                print(
                    f"  ({left.state_name(step.left)}, {right.state_name(step.right)}) "
                    f"{step.offered_by} offers {step.action}: {step.reason}"
                )
    return 0 if result.verdict else 1


def cmd_confluence(cfg: RunConfig) -> int:
    lts = read_aut_file(cfg.inputs[0])
    lists = cfg.label_lists()
    if lists is None:
        raise InvalidArgumentError("confluence needs --sigma1/--sigma2 or --partition.")
    first, second = (frozenset(Action.parse(label) for label in labels) for labels in lists)
    report = is_confluent(lts, first, second)
    if cfg.json_output:
        _emit_json(report.to_json_dict(lts))
    else:
        print(_paint(f"confluent: {'yes' if report.verdict else 'no'}", ok=report.verdict))
        names = lts.display_names
        for v in report.violations:
            print(
                f"  {names[v.state]} -{v.first}-> {names[v.first_target]} and "
                f"{names[v.state]} -{v.second}-> {names[v.second_target]} do not close"
            )
    return 0 if report.verdict else 1


def cmd_demo_dpbb(cfg: RunConfig) -> int:
    report = dpbb_impossibility_demo(capacities=(cfg.capacity or 1,))
    payload = report.to_json_dict()
    text = report.render_text()
    if cfg.out is not None:
        cfg.out.mkdir(parents=True, exist_ok=True)
        (cfg.out / "dpbb_demo.json").write_text(json.dumps(payload, indent=2) + "\n", encoding="utf-8")
        (cfg.out / "dpbb_demo.txt").write_text(text, encoding="utf-8")
    if cfg.json_output:
        _emit_json(payload)
    else:
        print(text, end="")
    return 0 if report.holds else 1


def cmd_generate(cfg: RunConfig) -> int:
    defaults = load_settings().generator
    lts = generate_lts(
        seed=cfg.seed,
        states=cfg.states if cfg.states is not None else defaults.default_states,
        actions=cfg.actions if cfg.actions is not None else defaults.default_actions,
        density=cfg.density if cfg.density is not None else defaults.default_density,
    )
    if cfg.out is None:
        print(write_aut(lts), end="")
    else:
        write_aut_file(lts, cfg.out)
        print(f"Wrote {cfg.out} ({lts.num_states} states, {len(lts.transitions)} transitions)")
    return 0


COMMANDS: dict[str, Callable[[RunConfig], int]] = {
    "decompose": cmd_decompose,
    "compose": cmd_compose,
    "check": cmd_check,
    "confluence": cmd_confluence,
    "demo-dpbb": cmd_demo_dpbb,
    "generate": cmd_generate,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ltsd",
        description="Decompose labelled transition systems and check the recomposition against the source.",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    parser.add_argument("--verbose", action="store_true", help="Log debug output to stderr")
    sub = parser.add_subparsers(dest="command", required=True)

    def partition_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--sigma1", type=_label_list, help="Comma-separated labels of the first half, e.g. a1,a2")
        p.add_argument("--sigma2", type=_label_list, help="Comma-separated labels of the second half")
        p.add_argument("--partition", dest="partition_file", type=Path, help="YAML file with sigma1/sigma2 lists")

    def output_args(p: argparse.ArgumentParser) -> None:
        p.add_argument("--out", type=Path, help="Output directory (file for generate)")
        p.add_argument("--json", dest="json_output", action="store_true", help="Machine-readable output")

    decompose = sub.add_parser("decompose", help="Split an .aut file into two communicating components")
    decompose.add_argument("input", type=Path, help="Source .aut file")
    decompose.add_argument("--mode", choices=["sync", "async"], default="sync", help="Communication style")
    decompose.add_argument("--capacity", type=int, help="Queue capacity for --mode async")
    partition_args(decompose)
    output_args(decompose)

    compose = sub.add_parser("compose", help="Recompose the components named by a decomposition manifest")
    compose.add_argument("input", type=Path, help="manifest.json written by decompose")
    output_args(compose)

    check = sub.add_parser("check", help="Compare two systems (an .aut file or a decomposition manifest each)")
    check.add_argument("left", type=Path)
    check.add_argument("right", type=Path)
    check.add_argument("--divergence", action="store_true", help="Divergence-preserving comparison")
    check.add_argument("--json", dest="json_output", action="store_true", help="Print the verdict as JSON")

    confluence = sub.add_parser("confluence", help="Check confluence of an .aut file over two label sets")
    confluence.add_argument("input", type=Path)
    partition_args(confluence)
    confluence.add_argument("--json", dest="json_output", action="store_true", help="Print the report as JSON")

    demo = sub.add_parser("demo-dpbb", help="Show that decomposition breaks divergence-preserving equivalence")
    demo.add_argument("--capacity", type=int, help="Queue capacity of the asynchronous pipeline")
    output_args(demo)

    generate = sub.add_parser("generate", help="Write a seeded random .aut file")
    generate.add_argument("--seed", type=int, default=0)
    generate.add_argument("--states", type=int)
    generate.add_argument("--actions", type=int)
    generate.add_argument("--density", type=float)
    generate.add_argument("--out", type=Path, help="Output .aut path (stdout when omitted)")

    return parser


def _config_from_args(args: argparse.Namespace) -> RunConfig:
    values = vars(args)
    inputs = [values[key] for key in ("input", "left", "right") if values.get(key) is not None]
    fields = {
        key: values[key]
        for key in (
            "mode",
            "sigma1",
            "sigma2",
            "partition_file",
            "capacity",
            "divergence",
            "out",
            "json_output",
            "seed",
            "states",
            "actions",
            "density",
        )
        if values.get(key) is not None
    }
    return RunConfig(command=args.command, inputs=tuple(inputs), **fields)


def main(argv: Sequence[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(
        level=logging.DEBUG if args.verbose else logging.WARNING,
        format="%(levelname)s %(name)s: %(message)s",
    )
    try:
        cfg = _config_from_args(args)
        return COMMANDS[cfg.command](cfg)
    except (LtsdError, ValidationError, OSError, yaml.YAMLError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
