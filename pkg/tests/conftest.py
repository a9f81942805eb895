import numpy as np
import pytest

from kappageom import EnergyModel, FiniteDensity, StateSpace

KAPPAS = [0.0, 0.25, 0.5, 0.9]

# reference basis (index 2 sublattice) of the integer vectors orthogonal to 1 and U = (0, 0, 1, 2, 2)
TOY_V = [
    (1, -1, 0, 0, 0),
    (0, 0, 0, 1, -1),
    (1, 1, -4, 1, 1),
]


@pytest.fixture
def toy():
    return EnergyModel(StateSpace.of_size(5), np.array([0, 0, 1, 2, 2.0]), lattice_step=1.0)


@pytest.fixture
def rng():
    return np.random.default_rng(20080915)


def random_density(rng, n, spread=1.0):
    w = np.exp(spread * rng.normal(size=n))
    w /= w.sum()
    w[-1] = 1.0 - w[:-1].sum()
    return FiniteDensity(StateSpace.of_size(n), w)


def random_centered(rng, p, scale=1.0):
    u = scale * rng.normal(size=len(p))
    return u - np.dot(p.weights, u)


def pytest_terminal_summary(terminalreporter):
    import sys

    mod = sys.modules.get("tests.test_acceptance")
    if mod is None or not mod.RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(mod.RESULTS):
        terminalreporter.write_line(mod.RESULTS[n])
