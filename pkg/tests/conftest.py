import pytest

ACCEPTANCE_LINES: dict[int, str] = {}


@pytest.fixture
def record_criterion():
    def record(number: int, result, limit: float | None = None) -> None:
        status = "PASS" if result.ok else "FAIL"
        if limit is not None and result.elapsed >= limit:
            status = "FAIL"
        n = len(result.findings)
        line = (
            f"criterion {number:>2}: {status}  {result.title}  "
            f"[{n - len(result.failures)}/{n} sub-checks, {result.elapsed:.1f}s"
            + (f" < {limit:.0f}s" if limit is not None else "")
            + "]"
        )
        if result.failures:
            line += "\n    failing: " + "\n    failing: ".join(
                f"{f.subject}: {f.detail}" for f in result.failures
            )
        ACCEPTANCE_LINES[number] = line
        print(line)

    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[number])
