"""Shared fixtures and the acceptance summary printed at the end of the run."""

from __future__ import annotations

import sys
from pathlib import Path

import pytest

sys.path.insert(0, str(Path(__file__).parent))

# criterion number -> title and the outcome of each recorded part
ACCEPTANCE: dict[int, tuple[str, list[tuple[bool, str]]]] = {}


def record(number: int, title: str, passed: bool, detail: str = "") -> None:
    """Record one part of an acceptance criterion; a criterion passes when all its parts do."""
    ACCEPTANCE.setdefault(number, (title, []))[1].append((passed, detail))
    print(f"criterion {number}: {'PASS' if passed else 'FAIL'} - {title}" + (f" ({detail})" if detail else ""))


@pytest.fixture
def acceptance():
    return record


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for number in sorted(ACCEPTANCE):
        title, parts = ACCEPTANCE[number]
        passed = all(ok for ok, _ in parts)
        details = "; ".join(d for _, d in parts if d)
        line = f"criterion {number:2d}: {'PASS' if passed else 'FAIL'}  {title}"
        terminalreporter.write_line(line + (f"  [{details}]" if details else ""))
