import random
import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

ROOT = Path(__file__).resolve().parent.parent
_criteria = {}


@pytest.fixture
def rng():
    return random.Random(1234)


@pytest.fixture
def trees_dir():
    return ROOT / "trees"


def pytest_runtest_logreport(report):
    if report.when == "call" and "test_acceptance.py" in report.nodeid:
        name = report.nodeid.split("::")[-1]
        _criteria[name] = report.outcome


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda n: int(n.split("_")[1])):
        status = "PASS" if _criteria[name] == "passed" else "FAIL"
        terminalreporter.write_line(f"{status}  {name}")
