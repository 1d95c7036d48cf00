import pytest

ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def criterion():
    def record(number: int, title: str, ok: bool, detail: str = ""):
        ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {number:>2}. {title}  {detail}".rstrip())
        print(ACCEPTANCE_LINES[-1])
        assert ok, f"criterion {number} failed: {detail}"

    return record
