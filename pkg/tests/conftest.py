import pytest

from gtl import fixtures


@pytest.fixture
def fixture_source():
    return fixtures.read


def pytest_terminal_summary(terminalreporter):
    lines = []
    for outcome in ("passed", "failed"):
        for rep in terminalreporter.stats.get(outcome, []):
            if getattr(rep, "when", None) != "call" or "test_acceptance.py::" not in rep.nodeid:
                continue
            title = dict(rep.user_properties).get("criterion", rep.nodeid)
            n = int(rep.nodeid.split("::test_ac")[1][:2])
            lines.append((n, f"AC{n:02d} {'PASS' if outcome == 'passed' else 'FAIL'}  {title}"))
    if lines:
        terminalreporter.section("acceptance criteria")
        for _, line in sorted(lines):
            terminalreporter.line(line)
