import functools

import pytest

from bellrand.seesaw import SeesawConfig, seesaw_optimize

ACCEPTANCE_LINES: list[str] = []


@functools.lru_cache(maxsize=None)
def cached_seesaw(n, local_dim, restarts=50, seed=0):
    return seesaw_optimize(SeesawConfig(n=n, local_dim=local_dim, restarts=restarts, seed=seed))


@pytest.fixture(scope="session")
def seesaw_run():
    return cached_seesaw


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
