import os
from pathlib import Path

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile("default", max_examples=100, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))

DATA = Path(__file__).parent / "data"

_criteria: list[str] = []


@pytest.fixture
def data_dir():
    return DATA


@pytest.fixture
def criterion():
    """Record one PASS/FAIL line per acceptance criterion."""
    def record(number, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number}: {detail}"
        _criteria.append(line)
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _criteria:
        terminalreporter.section("acceptance criteria")
        for line in sorted(_criteria, key=lambda s: int(s.split()[2].rstrip(":"))):
            terminalreporter.write_line(line)
