import pytest

from compartdb.identifiability import AssessConfig
from compartdb.modeldb import Database, build


@pytest.fixture(scope="session")
def db3_dir(tmp_path_factory):
    path = tmp_path_factory.mktemp("db3")
    build(3, AssessConfig(), path)
    return path


@pytest.fixture(scope="session")
def db3(db3_dir):
    return Database.load(db3_dir)


def pytest_terminal_summary(terminalreporter):
    try:
        from test_acceptance import RESULTS
    except ImportError:
        return
    if RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in RESULTS:
            terminalreporter.write_line(line)
