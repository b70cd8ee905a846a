import sys

import pytest

from dcirefute.construction import build
from dcirefute.dci import babai_refutation


@pytest.fixture(scope="session")
def b11():
    return build((1, 1))


@pytest.fixture(scope="session")
def b31():
    return build((3, 1))


@pytest.fixture(scope="session")
def b13():
    return build((1, 3))


@pytest.fixture(scope="session")
def cert11():
    return babai_refutation((1, 1))


@pytest.fixture(scope="session")
def cert31():
    return babai_refutation((3, 1))


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
