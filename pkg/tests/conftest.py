import os

import numpy as np
import pytest

_ACCEPTANCE = []


@pytest.fixture
def rng():
    """Generator seeded from ``HEISMAG_SEED`` (default 20240613)."""
    return np.random.default_rng(int(os.environ.get("HEISMAG_SEED", "20240613")))


@pytest.fixture
def acceptance_line():
    def record(number, title, ok, detail):
        line = f"{'PASS' if ok else 'FAIL'} criterion {number:>2}: {title} ({detail})"
        _ACCEPTANCE.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _ACCEPTANCE:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_ACCEPTANCE, key=lambda p: p[0]):
        terminalreporter.write_line(line)
