import sys
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

sys.path.insert(0, str(Path(__file__).parent))

from groupoid_galois import catalog  # noqa: E402
from groupoid_galois.algebra import BaseRing  # noqa: E402

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")

GOLDEN = Path(__file__).parent / "golden"
BASES = [BaseRing(), BaseRing(2), BaseRing(5)]


@pytest.fixture(scope="session")
def s8():
    return catalog.s8_example()


@pytest.fixture(scope="session")
def beta47():
    return catalog.non_galois_global()


@pytest.fixture(scope="session")
def two_z2():
    return catalog.not_strongly_galois()


def pytest_terminal_summary(terminalreporter):
    mod = sys.modules.get("test_acceptance")
    lines = getattr(mod, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
