import math

import numpy as np
import pytest

from mzifisher.moments import squeezed_coherent

ACCEPTANCE_RESULTS = {}


def random_port(rng, max_mag=2.0, max_factor=1.0):
    return squeezed_coherent(
        rng.uniform(0.0, max_mag), rng.uniform(0.0, 2 * math.pi), rng.uniform(0.0, max_factor), rng.uniform(0.0, 2 * math.pi)
    )


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


def record(criterion: int, passed: bool, detail: str = ""):
    """Store one check of a criterion; a criterion passes only if all its checks pass."""
    prev_ok, prev_detail = ACCEPTANCE_RESULTS.get(criterion, (True, ""))
    joined = "; ".join(d for d in (prev_detail, detail) if d)
    ACCEPTANCE_RESULTS[criterion] = (prev_ok and bool(passed), joined)


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for criterion in sorted(ACCEPTANCE_RESULTS):
        passed, detail = ACCEPTANCE_RESULTS[criterion]
        status = "PASS" if passed else "FAIL"
        terminalreporter.write_line(f"criterion {criterion:2d}: {status}  {detail}")
