"""End-to-end integration tests.

These run the installed ``chipfire`` entry point as a subprocess, so the
package must be installed (``pip install -e .``).

Run with: pytest tests/test_integration.py -v -m integration
Skip with: pytest tests/ -v -m "not integration"
"""

import json
import os
import shutil
import subprocess
import sys

import pytest

pytestmark = pytest.mark.integration


def chipfire(*args: str, env: dict | None = None) -> subprocess.CompletedProcess:
    exe = shutil.which("chipfire")
    command = [exe] if exe else [sys.executable, "-m", "chipfire.cli"]
    return subprocess.run(
        [*command, *args],
        capture_output=True,
        text=True,
        timeout=120,
        env={**os.environ, **(env or {})},
    )


def test_generate_then_search(tmp_path) -> None:
    """Generate a graph to a file, then search it."""
    graph = tmp_path / "c4.txt"
    generated = chipfire("gen", "cycle", "4", "--text", "-o", str(graph))
    assert generated.returncode == 0, generated.stderr

    result = chipfire("gon", "-g", str(graph), "-r", "2")

    assert result.returncode == 0, result.stderr
    data = json.loads(result.stdout)
    assert data["result"]["minimum_degree"] == 3


def test_reproduction_with_workers() -> None:
    result = chipfire("repro", "c4-gon2", "--threads", "2")

    assert result.returncode == 0, result.stderr
    assert json.loads(result.stdout)["result"]["match"] is True


def test_diagnostics_go_to_stderr(tmp_path) -> None:
    graph = tmp_path / "broken.txt"
    graph.write_text("n 3\n0 1 1\n")

    result = chipfire("alpha", "-g", str(graph), "-r", "1", env={"CHIPFIRE_LOG_LEVEL": "INFO"})

    assert result.returncode == 2
    assert result.stdout == ""
    assert "not connected" in result.stderr


def test_budget_exit_code(tmp_path) -> None:
    graph = tmp_path / "crown.txt"
    chipfire("gen", "crown", "10", "-o", str(graph))

    result = chipfire("gon", "-g", str(graph), "-r", "2", "--budget", "0.000001")

    assert result.returncode == 3
    assert json.loads(result.stdout)["result"]["budget_exceeded"] is True
