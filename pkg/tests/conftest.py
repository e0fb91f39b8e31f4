import numpy as np
import pytest

from roleflow.fixture import generate


@pytest.fixture(scope="session")
def fixture_dir(tmp_path_factory):
    """The shipped 200-account synthetic corpus, generated once per session."""
    return generate(tmp_path_factory.mktemp("fixture"))


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    from test_acceptance import ACCEPTANCE_KEY

    lines = config.stash.get(ACCEPTANCE_KEY, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
