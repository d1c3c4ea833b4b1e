import numpy as np
import pytest

from radonphantom.analysis import compare_pipelines
from radonphantom.analytic import SinogramGrid
from radonphantom.phantom import GALLERY_NAMES, Ellipse, Rectangle, gallery


def random_figure(rng, kind=None):
    """Random figure comfortably inside the unit disk."""
    kind = kind or rng.choice(["ellipse", "rectangle"])
    x0, y0 = rng.uniform(-0.4, 0.4, size=2)
    phi = rng.uniform(0, 2 * np.pi)
    delta = rng.uniform(0.1, 2.0)
    if kind == "ellipse":
        a, b = rng.uniform(0.05, 0.5, size=2)
        return Ellipse(x0, y0, a, b, phi, delta)
    wx, wy = rng.uniform(0.05, 0.7, size=2)
    return Rectangle(x0, y0, wx, wy, phi, delta)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


@pytest.fixture(scope="session")
def table_grid():
    return SinogramGrid.default(300, 360)


@pytest.fixture(scope="session")
def gallery_reports(table_grid):
    """Pipeline comparison for every gallery phantom at n=300, 360 angles."""
    return {
        name: compare_pipelines(gallery(name), 300, table_grid, 3, name=name)
        for name in GALLERY_NAMES
    }


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for k in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[k])
