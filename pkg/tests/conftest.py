import numpy as np
import pytest

ACCEPTANCE_LINES = []


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def record():
    """One PASS/FAIL line per acceptance criterion, shown in the terminal summary.

    ``checks`` is a list of ``(label, value, tol)``; the criterion passes when
    every value is within its tolerance and the runtime is under ``limit``.
    """

    def _record(criterion: str, checks, elapsed: float, limit: float) -> bool:
        ok = all(v <= tol for _, v, tol in checks) and elapsed < limit
        detail = "; ".join(f"{label} {v:.2e}<={tol:.0e}" for label, v, tol in checks)
        line = f"{'PASS' if ok else 'FAIL'}  {criterion}  [{elapsed:.2f}s<{limit:g}s]  {detail}"
        ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
