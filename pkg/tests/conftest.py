import numpy as np
import pytest

FAMILIES = ["abs", "log", "rat", "atan"]
NONCONVEX = ["log", "rat", "atan"]


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def brute_force_scalar(y, lam, penalty, step=1e-6):
    """Grid minimizer of 0.5*(y - x)**2 + lam*phi(x) over x between 0 and y."""
    from pogs.penalty import phi

    grid = np.arange(0.0, abs(y) + step, step) * np.sign(y)
    vals = 0.5 * (y - grid) ** 2 + lam * phi(penalty, grid)
    return grid[np.argmin(vals)]


ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
