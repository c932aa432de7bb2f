import math

import numpy as np
import pytest
from hypothesis import strategies as st

from axialdirac.state import StateParams

_ACCEPTANCE_LINES: list[str] = []


@pytest.fixture
def acceptance_log():
    """Append one PASS/FAIL line per acceptance criterion to the terminal summary."""

    def log(criterion: str, ok: bool, detail: str) -> None:
        _ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] {criterion}: {detail}")

    return log


def pytest_terminal_summary(terminalreporter):
    if _ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in _ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


def random_params(rng, n, ell_z=1.0):
    """Valid parameter draws: epsilon in (1, 10], beta in (0, 4], full angle ranges."""
    out = []
    for _ in range(n):
        out.append(StateParams(1.0 + rng.uniform(1e-3, 9.0), rng.uniform(1e-3, 4.0),
                               rng.uniform(0.0, math.pi), rng.uniform(0.0, 2.0 * math.pi), ell_z))
    return out


params_strategy = st.builds(
    StateParams,
    epsilon=st.floats(1.001, 10.0),
    beta=st.floats(1e-3, 4.0),
    theta=st.floats(0.0, math.pi),
    phi=st.floats(0.0, 2.0 * math.pi, exclude_max=True),
    ell_z=st.floats(0.1, 100.0),
)
