import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=200,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("repo")

ACCEPTANCE = {}


@pytest.fixture
def criterion():
    """``report = criterion(n)`` opens a line for criterion ``n``; ``report(ok, detail)`` fills it."""
    def start(number):
        ACCEPTANCE[number] = (False, "did not complete")

        def report(ok, detail):
            ACCEPTANCE[number] = (bool(ok), detail)
            return bool(ok)
        return report
    return start


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        ok, detail = ACCEPTANCE[number]
        terminalreporter.write_line(f"criterion {number}: {'PASS' if ok else 'FAIL'}  {detail}")
