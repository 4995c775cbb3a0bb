import sys

import numpy as np
import pytest

from stereoshape.linalg_core import Tolerances


@pytest.fixture
def tol():
    return Tolerances()


@pytest.fixture
def rng():
    return np.random.default_rng(20261015)



def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    rows = getattr(module, "RESULTS", None)
    if not rows:
        return
    terminalreporter.section("acceptance criteria")
    for label, result in sorted(rows, key=lambda r: r[0]):
        terminalreporter.write_line(f"{'PASS' if result.passed else 'FAIL'}  {label}")
