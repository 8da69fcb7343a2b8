"""Shared test fixtures: the built-in structures and an in-process CLI runner."""
from __future__ import annotations

import io
import json
from contextlib import redirect_stdout

import pytest

from autostruct.fixtures import fixture_control, fixture_file, fixture_z, fixture_z2
from autostruct import cli


@pytest.fixture(scope="session")
def z2():
    return fixture_z2()


@pytest.fixture(scope="session")
def z():
    return fixture_z()


@pytest.fixture(scope="session")
def control():
    return fixture_control()


@pytest.fixture(scope="session")
def all_fixtures(z2, z, control):
    return (z2, z, control)


@pytest.fixture(scope="session")
def z2_file():
    return str(fixture_file("z2"))


@pytest.fixture(scope="session")
def z_file():
    return str(fixture_file("z"))


@pytest.fixture(scope="session")
def control_file():
    return str(fixture_file("control"))


def run_cli(argv: list[str]) -> tuple[int, str]:
    """Run the CLI in-process, returning (exit code, stdout text)."""
    buffer = io.StringIO()
    with redirect_stdout(buffer):
        code = cli.main(argv)
    return code, buffer.getvalue()


def records(output: str) -> list[dict]:
    return [json.loads(line) for line in output.splitlines() if line]


@pytest.fixture
def cli_runner():
    return run_cli
