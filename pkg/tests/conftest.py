import math

import pytest

from laurent_envelopes.coefficients import Family, coefficient_table


@pytest.fixture(scope="session")
def tables():
    return {f: coefficient_table(f, 22) for f in Family}


def close(a: float, b: float, tol: float) -> bool:
    return math.isfinite(a) and abs(a - b) <= tol


ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def report():
    """report(tag, ok, detail): record one acceptance line, then assert ok."""
    def _report(tag: str, ok: bool, detail: str) -> None:
        line = f"criterion {tag:<4} {'PASS' if ok else 'FAIL'}  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        assert ok, line
    return _report


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for line in ACCEPTANCE_LINES:
        terminalreporter.write_line(line)
