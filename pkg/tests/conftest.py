import numpy as np
import pytest

_ACCEPTANCE = {}


@pytest.fixture
def acceptance():
    """Record one summary line per acceptance criterion."""

    def record(criterion, passed, detail):
        _ACCEPTANCE[str(criterion)] = (bool(passed), detail)
        return passed

    return record


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(_ACCEPTANCE):
        passed, detail = _ACCEPTANCE[criterion]
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if passed else 'FAIL'}  {detail}")
