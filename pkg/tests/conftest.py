import numpy as np
import pytest

from polygame.families import rescue_function, scheduling_function
from polygame.setfunc import SUBMODULAR, TableFunction

_ACCEPTANCE: dict = {}


@pytest.fixture
def record():
    """Store one pass/fail line for an acceptance criterion."""

    def _record(number, title, passed, detail=""):
        line = f"criterion {number} [{'PASS' if passed else 'FAIL'}] {title}"
        if detail:
            line += f": {detail}"
        _ACCEPTANCE[number] = line
        print(line)
        return passed

    return _record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(_ACCEPTANCE):
        terminalreporter.write_line(_ACCEPTANCE[number])


@pytest.fixture
def rescue_f():
    """p = (0.5, 0.5): f({0}) = f({1}) = 0.5, f(V) = 0.75."""
    return rescue_function([0.5, 0.5])


@pytest.fixture
def sched_g():
    """t = (1, 2): g({0}) = 1, g({1}) = 4, g(V) = 7."""
    return scheduling_function([1.0, 2.0])


@pytest.fixture
def card():
    def make(n):
        return TableFunction([bin(m).count("1") for m in range(1 << n)], SUBMODULAR)

    return make


@pytest.fixture
def rng():
    return np.random.default_rng(20261014)
