import numpy as np
import pytest

from novikovlab import make_grid

_CRITERIA = []


def smooth_field(grid, rng, modes=12, decay=0.35, offset=0.0):
    """Random real trigonometric polynomial with geometrically decaying modes."""
    j = np.arange(1, modes + 1)
    amp = np.exp(-decay * j)
    a = rng.standard_normal(modes) * amp
    b = rng.standard_normal(modes) * amp
    phase = 2.0 * np.pi * np.outer(grid.x, j) / grid.L
    return offset + np.cos(phase) @ a + np.sin(phase) @ b


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture
def grid2pi():
    return make_grid(2.0 * np.pi, 256)


@pytest.fixture
def record_criterion():
    """Record a one-line verdict for the acceptance summary, then return ``ok``."""

    def record(number, name, ok, detail):
        line = f"criterion {number:>2} [{'PASS' if ok else 'FAIL'}] {name}: {detail}"
        _CRITERIA.append((number, line))
        print(line)
        return ok

    return record


def pytest_terminal_summary(terminalreporter):
    if not _CRITERIA:
        return
    terminalreporter.section("acceptance criteria")
    for _, line in sorted(_CRITERIA, key=lambda item: item[0]):
        terminalreporter.write_line(line)
