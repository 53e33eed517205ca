import pytest

from cremona_dec.algebra import FieldSpec


@pytest.fixture
def Q():
    return FieldSpec()


@pytest.fixture
def F101():
    return FieldSpec(101)


@pytest.fixture
def F10007():
    return FieldSpec(10007)


ACCEPTANCE = pytest.StashKey[list]()


@pytest.fixture(scope="session")
def acceptance_log(request):
    """Collects one PASS/FAIL line per acceptance criterion."""
    return request.config.stash.setdefault(ACCEPTANCE, [])


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    lines = config.stash.get(ACCEPTANCE, [])
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.write_line(line)
