import numpy as np
import pytest
from hypothesis import settings

# keep property tests reproducible run to run and tolerant of slow first
# calls (jit warmup, BLAS thread spinup)
settings.register_profile("repro", deadline=None, derandomize=True)
settings.load_profile("repro")


@pytest.fixture
def rng():
    return np.random.default_rng(20260823)


# acceptance-criterion outcomes registered by tests/test_acceptance.py,
# echoed one line apiece at the end of the run
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
