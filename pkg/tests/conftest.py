import numpy as np
import pytest

from orfq import orf
from orfq.verify import random_instance


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def mixed_system(rng):
    mu, seq = random_instance(rng, 8, zero_prob=0.15)
    return orf.build_system(mu, seq, 8, "G")


_ACCEPTANCE_LINES = []


@pytest.fixture
def report():
    """Record one pass/fail line for the acceptance summary."""

    def _report(number, name, value, tol, ok=None):
        ok = bool(np.isfinite(value) and value <= tol) if ok is None else ok
        line = f"criterion {number:>2}  {'PASS' if ok else 'FAIL'}  {name}  worst={value:.3e}  tol={tol:.0e}"
        _ACCEPTANCE_LINES.append(line)
        print(line)
        return ok

    return _report


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
