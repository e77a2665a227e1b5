"""
Pytest configuration and fixtures for running ccg commands via shell.
The CLI runs as `python -m clifford_cyclotomic_tool.cli` from the repository
root, so the tests work without installing the console script.
"""
import json
import os
import random
import subprocess
import sys
from dataclasses import dataclass
from pathlib import Path

import pytest

REPO_ROOT = Path(__file__).resolve().parent.parent


@dataclass
class ShellResult:
    exit_code: int
    output: str
    stdout: str = ""

    def json(self):
        return json.loads(self.stdout)


class ShellRunner:
    """Minimal runner that executes the 'ccg' CLI in a subprocess."""
    def invoke(self, _cli_unused, args, input=None):
        cmd = [sys.executable, "-m", "clifford_cyclotomic_tool.cli"] + [str(a) for a in args]
        proc = subprocess.run(
            cmd,
            stdout=subprocess.PIPE,
            stderr=subprocess.PIPE,
            text=True,
            cwd=str(REPO_ROOT),
            input=input,
        )
        # Combine stdout and stderr so tests can assert on messages regardless of stream
        out = (proc.stdout or "") + (proc.stderr or "")
        return ShellResult(exit_code=proc.returncode, output=out, stdout=proc.stdout or "")


@pytest.fixture
def runner():
    """Provides a shell-based runner that calls the ccg CLI."""
    return ShellRunner()


@pytest.fixture(autouse=True, scope="session")
def default_settings():
    """The whole session runs on the bundled settings, whatever $CCG_CONFIG says."""
    from clifford_cyclotomic_tool import config
    os.environ.pop(config.ENV_VAR, None)
    config.configure()


@pytest.fixture
def rng():
    """A seeded generator so sampled corpora are the same on every run."""
    return random.Random(2024)


@pytest.fixture
def temp_dir(tmp_path):
    """Provides a temporary directory as a pathlib.Path for payload and config files."""
    return tmp_path
