import pytest

from groupsleuth.blackbox import load_group
from groupsleuth.chartab import load_table_file
from groupsleuth.fixtures import TABLE_FILES, data_dir


def shipped_group(name, seed=0):
    return load_group(data_dir() / "groups" / f"{name}.json", seed=seed)


def shipped_table(name):
    return load_table_file(data_dir() / "tables" / TABLE_FILES[name])


@pytest.fixture(scope="session")
def tables():
    # A12 is slow to validate and only some tests need it
    return {name: shipped_table(name) for name in TABLE_FILES if name != "A12"}


@pytest.fixture(scope="session")
def a12_table():
    return shipped_table("A12")


# one summary line per acceptance criterion, filled in by test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
