import sys

import pytest

from soctam.benchmark_io import bundled_d695, bundled_p93791_core6


@pytest.fixture(scope="session")
def d695():
    return bundled_d695()


@pytest.fixture(scope="session")
def core6():
    return bundled_p93791_core6().core(6)


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[number])
