import pytest


@pytest.fixture(autouse=True)
def _isolated_cache(tmp_path_factory, monkeypatch):
    # zero tables are shared across one session but never touch the user's cache
    root = tmp_path_factory.getbasetemp() / "zero-cache"
    monkeypatch.setenv("DBZ_CACHE_DIR", str(root))


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
