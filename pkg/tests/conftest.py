import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

from morlgrid import environment, model  # noqa: E402

ACCEPTANCE = []


@pytest.fixture(scope="session")
def config():
    return model.default_system()


@pytest.fixture(scope="session")
def day(config):
    return environment.synth_day(environment.DEFAULT_DAY_SEED, config)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE:
        terminalreporter.write_line(line)
