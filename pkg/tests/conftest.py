import warnings

import pytest
from hypothesis import HealthCheck, settings

warnings.filterwarnings("ignore", message=".*TBB.*")

settings.register_profile("default", deadline=None, max_examples=40,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


@pytest.fixture(scope="session")
def cl_ref():
    from cumparisian import CramerLundbergParams
    return CramerLundbergParams(c=2.0, lam=1.0, alpha=1.0)


@pytest.fixture(scope="session")
def bm_ref():
    from cumparisian import BrownianParams
    return BrownianParams(c=1.0, sigma=1.0)


def pytest_terminal_summary(terminalreporter):
    import sys
    mod = sys.modules.get("test_acceptance") or sys.modules.get("tests.test_acceptance")
    results = getattr(mod, "RESULTS", None)
    if results:
        terminalreporter.section("acceptance criteria")
        for number in sorted(results):
            terminalreporter.write_line(results[number])
