from __future__ import annotations

import importlib
import runpy
import subprocess
import sys
from pathlib import Path

import pytest


def test_canonical_package_import_smoke() -> None:
    module = importlib.import_module("ltsd.decomposition")
    assert hasattr(module, "decomp_s")
    assert hasattr(module, "decomp_a")


def test_script_exposes_the_cli_main() -> None:
    repo_root = Path(__file__).resolve().parents[1]
    loaded = runpy.run_path(str(repo_root / "scripts" / "run_ltsd.py"), run_name="__test__")

    assert callable(loaded["main"])
    assert loaded["main"].__module__ == "ltsd.cli"


def test_ltsd_help_runs_without_pythonpath_bootstrap() -> None:
    repo_root = Path(__file__).resolve().parents[1]
    cmd = [sys.executable, str(repo_root / "scripts" / "run_ltsd.py"), "--help"]
    completed = subprocess.run(cmd, cwd=repo_root, capture_output=True, text=True, check=False)

    assert completed.returncode == 0
    assert "Decompose labelled transition systems" in completed.stdout


def test_version_flag(capsys: pytest.CaptureFixture[str]) -> None:
    from ltsd import __version__
    from ltsd.cli import main

    with pytest.raises(SystemExit) as excinfo:
        main(["--version"])
    assert excinfo.value.code == 0
    assert __version__ in capsys.readouterr().out
