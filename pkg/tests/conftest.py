from functools import lru_cache

import pytest

from nu_forge import catalog
from nu_forge.nu import realize_nu


@lru_cache(maxsize=None)
def realization(name):
    return realize_nu(catalog.build(name))


@pytest.fixture(scope="session")
def realize():
    return realization


# acceptance criteria record one line each; printed at the end of the run
CRITERIA = {}


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[n])
