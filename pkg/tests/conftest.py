import pytest
from hypothesis import settings

from nfgeom.examples import run_example

settings.register_profile("nf", max_examples=40, deadline=None)
settings.load_profile("nf")

# one line per acceptance criterion, filled in by test_acceptance.py
CRITERIA: dict[int, str] = {}


@pytest.fixture(scope="session")
def example_reports():
    cache = {}

    def get(name):
        if name not in cache:
            cache[name] = run_example(name)
        return cache[name]
    return get


def pytest_terminal_summary(terminalreporter):
    if not CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(CRITERIA):
        terminalreporter.write_line(CRITERIA[k])
