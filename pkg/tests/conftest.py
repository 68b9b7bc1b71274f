import os

import numpy as np
import pytest
from hypothesis import HealthCheck, settings

from modlat.lattice import SubspaceLattice

settings.register_profile("default", max_examples=60, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.register_profile("thorough", max_examples=500, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


def unit(n, *idx):
    """Sum of the 1-indexed standard basis vectors e_i."""
    v = np.zeros(n, dtype=np.int64)
    for i in idx:
        v[i - 1] = 1
    return v


@pytest.fixture
def e():
    return unit


@pytest.fixture
def f2_4():
    return SubspaceLattice(2, 4)


# one line per acceptance criterion, collected by tests/test_acceptance.py
ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_LINES, key=lambda s: int(s.split()[1].rstrip(":"))):
            terminalreporter.write_line(line)
