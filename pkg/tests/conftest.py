from __future__ import annotations

import pytest
from hypothesis import HealthCheck, settings

from contactsym.models import class_algebra

settings.register_profile(
    "repo", derandomize=True, deadline=None, max_examples=40,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("repo")


@pytest.fixture(scope="session")
def algebras():
    return {cls: class_algebra(cls) for cls in ("constant", "harmonic", "inverse_square", "arbitrary")}


_ACCEPTANCE: dict[int, str] = {}


@pytest.fixture
def criterion():
    """Records one pass/fail line per acceptance criterion."""
    def record(number: int, title: str, ok: bool, detail: str = "") -> bool:
        line = f"criterion {number} [{'PASS' if ok else 'FAIL'}] {title}" + (f": {detail}" if detail else "")
        _ACCEPTANCE[number] = line
        print(line)
        return ok
    return record


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE:
        terminalreporter.section("acceptance criteria")
        for n in sorted(_ACCEPTANCE):
            terminalreporter.write_line(_ACCEPTANCE[n])
