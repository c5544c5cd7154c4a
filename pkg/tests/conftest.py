import sys

import numpy as np
import pytest


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def pytest_terminal_summary(terminalreporter):
    """Print one PASS/FAIL line per acceptance criterion."""
    module = sys.modules.get("test_acceptance")
    results = getattr(module, "RESULTS", None)
    if not results:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(results, key=lambda c: int(c.split()[0])):
        checks = results[criterion]
        ok = all(passed for _, passed, _ in checks)
        terminalreporter.write_line(f"criterion {criterion}: {'PASS' if ok else 'FAIL'}")
        for part, passed, detail in checks:
            terminalreporter.write_line(f"    [{'pass' if passed else 'FAIL'}] {part}: {detail}")
