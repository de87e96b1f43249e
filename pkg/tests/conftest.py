import functools

import pytest

from scsphase.evolution import EvolutionSpec, build_context
from scsphase.fock import Truncation

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=2)
def cached_context(theta: float, r_ref: float, n_max: int, buffer: int = 10):
    return build_context(EvolutionSpec(theta, r_ref, Truncation(n_max, buffer)))


@pytest.fixture
def context():
    return cached_context


@pytest.fixture
def acceptance_log():
    def record(number: int, title: str, passed: bool, detail: str):
        ACCEPTANCE_LINES.append(f"[{'PASS' if passed else 'FAIL'}] criterion {number}: {title} ({detail})")
    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
