import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

FIXTURES = Path(__file__).parent / "fixtures"

_ACCEPTANCE = []


@pytest.fixture
def criterion(request):
    """Record one acceptance criterion; call it with (passed, detail).

    ``passed=None`` records a criterion that could not run here.
    """

    def record(passed, detail=""):
        _ACCEPTANCE.append((request.node.name, None if passed is None else bool(passed), detail))
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for name, passed, detail in _ACCEPTANCE:
        status = "SKIP" if passed is None else ("PASS" if passed else "FAIL")
        terminalreporter.write_line(f"{status}  {name}  {detail}")


@pytest.fixture
def fixtures_dir():
    return FIXTURES
