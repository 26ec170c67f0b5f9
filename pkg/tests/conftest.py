import pytest

from relaysec import LinkParams, SecrecyConfig


@pytest.fixture
def three_relays():
    links = LinkParams(1.0, 0.7, (0.3, 0.5, 0.2), (0.4, 0.9, 0.25), (1.3, 0.6, 2.0))
    return links, SecrecyConfig(1.0, 0.5)


@pytest.fixture
def defaults_db():
    """Direct links and threshold used by every preset."""
    return {"sd_db": 3.0, "se_db": 2.0, "gamma_th_db": 3.0}


ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one summary line per acceptance criterion."""

    def _report(name, ok, detail=""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {name}" + (f": {detail}" if detail else ""))
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
