import numpy as np
import pytest

from onofri_lab.numcore import make_grid


@pytest.fixture(scope="session")
def grid():
    return make_grid(128)


@pytest.fixture(scope="session")
def small_grid():
    return make_grid(48)


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


ACCEPTANCE = {}


def record(criterion, passed, detail):
    """Store one acceptance outcome; the line is echoed now and in the summary."""
    line = f"criterion {criterion:>2}: {'PASS' if passed else 'FAIL'}  {detail}"
    ACCEPTANCE[criterion] = line
    print(line)
    return passed


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for key in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[key])
