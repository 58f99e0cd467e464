import pytest

ACCEPTANCE: dict = {}


@pytest.fixture
def report():
    """Record one pass/fail line for an acceptance criterion."""
    def record(number, ok, detail):
        line = f"criterion {number}: {'PASS' if ok else 'FAIL'} ({detail})"
        ACCEPTANCE[number] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        terminalreporter.write_line(ACCEPTANCE[number])
