import numpy as np
import pytest
from hypothesis import settings

from orlicz_lab import Field, Grid

settings.register_profile("default", deadline=None, max_examples=25)
settings.load_profile("default")


@pytest.fixture(scope="session")
def grid1():
    return Grid(1, 1024, 16.0)


@pytest.fixture(scope="session")
def gauss1(grid1):
    return Field.from_function(grid1, lambda x: np.exp(-(x**2)))


@pytest.fixture(scope="session")
def grid2():
    return Grid(2, 128, 8.0)


ACCEPTANCE_KEY = pytest.StashKey[dict]()


@pytest.fixture
def record(request):
    """Store a criterion outcome; printed in the terminal summary."""
    store = request.config.stash.setdefault(ACCEPTANCE_KEY, {})

    def _record(number, ok, detail):
        line = f"criterion {number:2d}: {'PASS' if ok else 'FAIL'}  {detail}"
        store[number] = line
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    store = config.stash.get(ACCEPTANCE_KEY, {})
    if store:
        terminalreporter.section("acceptance criteria")
        for number in sorted(store):
            terminalreporter.write_line(store[number])
