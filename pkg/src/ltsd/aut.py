"""Aldebaran ``.aut`` reading and writing.

The header is ``des (initial, transition_count, state_count)`` followed by one
``(source,"label",target)`` line per transition. ``tau`` (or ``i`` on input)
denotes the internal action and a leading ``!`` marks a co-action.
"""

from __future__ import annotations

import re
from collections.abc import Iterable
from io import StringIO
from pathlib import Path

import pandas as pd

from ltsd.errors import AutParseError, InvalidArgumentError
from ltsd.interfaces import Action, Lts, Transition

_HEADER = re.compile(r"^des\s*\(\s*(\d+)\s*,\s*(\d+)\s*,\s*(\d+)\s*\)$")
_TRANSITION = re.compile(r'^\(\s*(\d+)\s*,\s*"([^"]*)"\s*,\s*(\d+)\s*\)$')


def _content_lines(text: str) -> Iterable[tuple[int, str]]:
    for number, raw in enumerate(text.split("\n"), start=1):
        line = raw.strip()
        if not line or line.startswith("#"):
            continue
        yield number, line


def parse_aut(text: str, names: Iterable[str] | None = None) -> Lts:
    lines = iter(_content_lines(text))
    try:
        header_no, header = next(lines)
    except StopIteration:
        raise AutParseError("missing 'des (initial,transitions,states)' header", line=1) from None

    match = _HEADER.match(header)
    if match is None:
        raise AutParseError(f"malformed header {header!r}", line=header_no)
    initial, declared, num_states = (int(group) for group in match.groups())
    if num_states < 1:
        raise AutParseError("state count must be at least 1", line=header_no)
    if initial >= num_states:
        raise AutParseError(f"initial state {initial} out of range for {num_states} states", line=header_no)

    transitions: set[Transition] = set()
    seen_lines = 0
    for number, line in lines:
        seen_lines += 1
        found = _TRANSITION.match(line)
        if found is None:
            raise AutParseError(f"malformed transition {line!r}", line=number)
        source, label, target = int(found.group(1)), found.group(2), int(found.group(3))
        if not label:
            raise AutParseError("empty label", line=number)
        for state in (source, target):
            if state >= num_states:
                raise AutParseError(f"state {state} out of range for {num_states} states", line=number)
        try:
            action = Action.parse(label)
        except InvalidArgumentError as exc:
            raise AutParseError(str(exc), line=number) from exc
        transitions.add(Transition(source, action, target))

    if seen_lines != declared:
        raise AutParseError(f"header declares {declared} transitions but {seen_lines} were found", line=header_no)

    return Lts.build(num_states=num_states, transitions=transitions, initial=initial, names=names)


def write_aut(lts: Lts) -> str:
    ordered = lts.sorted_transitions()
    lines = [f"des ({lts.initial},{len(ordered)},{lts.num_states})"]
    lines.extend(f'({tr.source},"{tr.action.text}",{tr.target})' for tr in ordered)
    return "\n".join(lines) + "\n"


def _decoded(path: Path) -> str:
    data = Path(path).read_bytes()
    try:
        return data.decode("utf-8")
    except UnicodeDecodeError as exc:
        raise AutParseError(f"{Path(path).name} is not valid UTF-8", line=data[: exc.start].count(b"\n") + 1) from exc


def read_aut_file(path: Path) -> Lts:
    names_path = names_file_for(path)
    names = read_names(names_path) if names_path.is_file() else None
    lts = parse_aut(_decoded(path))
    if names is not None and len(names) == lts.num_states:
        try:
            return Lts.build(lts.num_states, lts.transitions, lts.initial, lts.alphabet, names)
        except InvalidArgumentError as exc:
            raise InvalidArgumentError(f"{names_path.name}: {exc}") from exc
    return lts


def write_aut_file(lts: Lts, path: Path, with_names: bool = True) -> None:
    path = Path(path)
    path.parent.mkdir(parents=True, exist_ok=True)
    path.write_text(write_aut(lts), encoding="utf-8", newline="\n")
    if with_names and lts.names is not None:
        write_names(lts.names, names_file_for(path))


def names_file_for(path: Path) -> Path:
    path = Path(path)
    return path.with_name(f"{path.stem}.names.jsonl")


def naming_frame(names: Iterable[str]) -> pd.DataFrame:
    rows = [{"id": state, "name": name} for state, name in enumerate(names)]
    return pd.DataFrame(rows, columns=["id", "name"])


def write_names(names: Iterable[str], path: Path) -> None:
    frame = naming_frame(names)
    text = frame.to_json(orient="records", lines=True, force_ascii=False) if not frame.empty else ""
    if text and not text.endswith("\n"):
        text += "\n"
    Path(path).write_text(text, encoding="utf-8", newline="\n")


def read_names(path: Path) -> tuple[str, ...]:
    text = _decoded(path)
    if not text.strip():
        return ()
    try:
        frame = pd.read_json(StringIO(text), orient="records", lines=True, dtype={"id": int, "name": str})
        frame = frame.sort_values("id")
        return tuple(str(name) for name in frame["name"])
    except (ValueError, KeyError) as exc:
        raise AutParseError(f"{Path(path).name} is not a state name table: {exc}") from exc

