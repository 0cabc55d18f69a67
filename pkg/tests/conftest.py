import pytest
from hypothesis import HealthCheck, settings, strategies as st

from flowframing import fixtures
from flowframing.oracle import random_instance

settings.register_profile(
    "default",
    deadline=None,
    max_examples=50,
    suppress_health_check=[HealthCheck.too_slow, HealthCheck.data_too_large],
)
settings.load_profile("default")

# small enough that the brute-force oracles stay fast
instances = st.builds(
    random_instance,
    seed=st.integers(0, 10**6),
    max_edges=st.integers(3, 10),
    max_sources=st.integers(1, 3),
)

FIXTURES = dict(fixtures.FIXTURES, parallel_3=lambda: fixtures.parallel_edges(3))


@pytest.fixture(params=sorted(FIXTURES))
def fixture_dag(request):
    return FIXTURES[request.param]()


_acceptance: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if "test_acceptance.py::test_criterion" not in report.nodeid:
        return
    name = report.nodeid.split("::")[-1]
    if report.when == "call" or report.outcome != "passed":
        _acceptance[name] = "PASS" if report.passed else "FAIL"


def pytest_terminal_summary(terminalreporter):
    if not _acceptance:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_acceptance):
        terminalreporter.write_line(f"{_acceptance[name]}  {name}")
