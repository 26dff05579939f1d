import numpy as np
import pytest

from opgeom import space as sp


@pytest.fixture
def rng():
    return np.random.default_rng(20240601)


@pytest.fixture
def square():
    return sp.polyhedral2d([[1, -1], [1, 1], [-1, 1], [-1, -1]])


@pytest.fixture
def hexagon():
    s = np.sqrt(3) / 2
    return sp.polyhedral2d([[1, 0], [0.5, s], [-0.5, s], [-1, 0], [-0.5, -s], [0.5, -s]])


def random_orthogonal(rng, n):
    q, r = np.linalg.qr(rng.standard_normal((n, n)))
    return q * np.sign(np.diag(r))


def rotation(theta):
    c, s = np.cos(theta), np.sin(theta)
    return np.array([[c, -s], [s, c]])


def pytest_terminal_summary(terminalreporter):
    mod = __import__("sys").modules.get("test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for num in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[num])
