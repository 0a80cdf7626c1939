import pytest

from avglab.certify import TARGETS, certify_all
from avglab.realization import CANONICAL_RADII, realize


@pytest.fixture(scope="session")
def certificates():
    return certify_all(TARGETS)


@pytest.fixture(scope="session")
def canonical_full():
    return realize(CANONICAL_RADII["full"], "full")


@pytest.fixture(scope="session")
def canonical_smooth():
    return realize(CANONICAL_RADII["smooth"], "smooth")


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for n in sorted(results):
            terminalreporter.write_line(results[n])
