"""Locations of the bundled configuration and example systems."""

from __future__ import annotations

import os
from dataclasses import dataclass
from functools import lru_cache
from pathlib import Path

CONFIG_NAME = "ltsd.yaml"
_MARKERS = ("pyproject.toml", f"config/{CONFIG_NAME}")


@dataclass(frozen=True)
class Workspace:
    root: Path

    @classmethod
    def locate(cls, start: Path) -> Workspace:
        """Nearest directory at or above ``start`` holding the project manifest and the default settings."""
        for candidate in (start, *start.parents):
            if all((candidate / marker).is_file() for marker in _MARKERS):
                return cls(candidate)
        raise FileNotFoundError(f"No ltsd checkout at or above {start}; expected {' and '.join(_MARKERS)}.")

    @property
    def config_dir(self) -> Path:
        return self.root / "config"

    @property
    def data_dir(self) -> Path:
        return self.root / "data"


@lru_cache(maxsize=1)
def workspace() -> Workspace:
    home = os.getenv("LTSD_HOME")
    if home:
        return Workspace(Path(home).resolve())
    return Workspace.locate(Path(__file__).resolve().parent)


def settings_file() -> Path:
    override = os.getenv("LTSD_CONFIG")
    if override:
        return Path(override)
    return workspace().config_dir / CONFIG_NAME


def data_file(*parts: str) -> Path:
    return workspace().data_dir.joinpath(*parts)
