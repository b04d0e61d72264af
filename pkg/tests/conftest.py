import pytest

ACCEPTANCE = {}
ARTIFACTS = []


@pytest.fixture
def criterion(request):
    """Record a ``(passed, detail)`` verdict for the acceptance summary."""

    def record(number: int, passed: bool, detail: str) -> None:
        if number in ACCEPTANCE:  # parametrised criteria combine their checks
            prev_ok, prev = ACCEPTANCE[number]
            passed, detail = prev_ok and passed, f"{prev}; {detail}"
        ACCEPTANCE[number] = (bool(passed), detail)
        print(f"criterion {number}: {'PASS' if passed else 'FAIL'} | {detail}")

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE and not ARTIFACTS:
        return
    tr = terminalreporter
    tr.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        passed, detail = ACCEPTANCE[number]
        tr.write_line(f"criterion {number:2d}: {'PASS' if passed else 'FAIL'} | {detail}")
    for title, lines in ARTIFACTS:
        tr.section(title)
        for line in lines:
            tr.write_line(line)
