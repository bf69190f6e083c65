from __future__ import annotations

import pytest

from kit import Kit, library

# acceptance lines collected by test_acceptance, printed at the end of the run
ACCEPTANCE: list[str] = []


def pytest_configure(config):
    config.addinivalue_line("markers", "derived(id): expected value comes from the hand-reduction oracle `id`")
    config.addinivalue_line("markers", "claim(id): example restating a result the library formalizes")
    config.addinivalue_line("markers", "trivial: expected value follows directly from a definition")


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE:
            terminalreporter.write_line(line)


@pytest.fixture
def kit() -> Kit:
    return Kit()


@pytest.fixture(scope="session")
def lib() -> Kit:
    return Kit(library())
