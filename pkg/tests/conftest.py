import pathlib

import pytest

DATA_DIR = pathlib.Path(__file__).parent / "data"

# one line per acceptance criterion, echoed after the run
_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture(scope="session")
def data_dir() -> pathlib.Path:
    return DATA_DIR


@pytest.fixture
def acceptance():
    """Record a PASS/FAIL line for an acceptance criterion, then assert it."""

    def report(name: str, ok: bool, detail: str = "") -> None:
        line = f"[{'PASS' if ok else 'FAIL'}] {name}"
        if detail:
            line += f": {detail}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line

    return report


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
