"""Pytest wiring: per-criterion pass/fail lines for the acceptance module."""

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

_ACCEPTANCE_RESULTS: list[tuple[str, str]] = []
_ACCEPTANCE_NOTES: list[str] = []


def record_note(line: str) -> None:
    """Queue a measurement line for the end-of-run acceptance summary."""
    _ACCEPTANCE_NOTES.append(line)


@pytest.hookimpl(hookwrapper=True)
def pytest_runtest_makereport(item, call):
    outcome = yield
    report = outcome.get_result()
    if report.when != "call" or "test_acceptance" not in item.nodeid:
        return
    label = item.function.__doc__ or item.name
    label = label.strip().splitlines()[0]
    _ACCEPTANCE_RESULTS.append((label, "PASS" if report.passed else "FAIL"))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE_RESULTS and not _ACCEPTANCE_NOTES:
        return
    terminalreporter.section("acceptance criteria")
    for label, outcome in _ACCEPTANCE_RESULTS:
        terminalreporter.write_line(f"[{outcome}] {label}")
    for note in _ACCEPTANCE_NOTES:
        terminalreporter.write_line(note)
