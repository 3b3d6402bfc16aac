"""Shared test plumbing: the acceptance-criteria report.

Acceptance tests register one line per criterion through record_criterion;
the terminal summary prints them all, PASS or FAIL, after the run.
"""
from typing import List, Tuple

_ACCEPTANCE: List[Tuple[float, str, bool, str]] = []


def record_criterion(sort_key: float, label: str, passed: bool, detail: str) -> None:
    _ACCEPTANCE.append((sort_key, label, passed, detail))


def pytest_terminal_summary(terminalreporter, exitstatus, config):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, label, passed, detail in sorted(_ACCEPTANCE, key=lambda r: r[0]):
        verdict = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"ACCEPTANCE {label} {verdict}: {detail}")
