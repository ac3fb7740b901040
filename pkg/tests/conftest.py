"""Shared reporting for the acceptance suite.

Each acceptance test records a one-line verdict; the collected lines are
echoed in the terminal summary so a plain `pytest -v` shows every criterion
outcome even when output capture is active.
"""

_ACCEPTANCE_LINES: list[str] = []


def record_acceptance(number: int, passed: bool, detail: str) -> None:
    verdict = "PASS" if passed else "FAIL"
    line = f"acceptance criterion {number:2d}: {verdict} — {detail}"
    _ACCEPTANCE_LINES.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in sorted(_ACCEPTANCE_LINES):
        terminalreporter.write_line(line)
