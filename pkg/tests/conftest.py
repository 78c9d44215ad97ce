from __future__ import annotations

import random

import pytest

ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def rng() -> random.Random:
    return random.Random(12345)


@pytest.fixture
def acceptance_log():
    def log(line: str) -> None:
        ACCEPTANCE_LINES.append(line)
        print(line)

    return log


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
