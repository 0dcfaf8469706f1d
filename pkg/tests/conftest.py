from __future__ import annotations

import sys

import pytest

from gamering import Arena, Relations
from gamering.lab import Lab

sys.setrecursionlimit(20_000)

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="module")
def lab() -> Lab:
    return Lab()


@pytest.fixture(scope="module")
def arena(lab: Lab) -> Arena:
    return lab.arena


@pytest.fixture(scope="module")
def rel(lab: Lab) -> Relations:
    return lab.rel


@pytest.fixture(scope="module")
def u1(arena: Arena) -> list[int]:
    return arena.enumerate_forms(1)


@pytest.fixture(scope="module")
def u2(arena: Arena) -> list[int]:
    return arena.enumerate_forms(2)


def pytest_terminal_summary(terminalreporter) -> None:
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
