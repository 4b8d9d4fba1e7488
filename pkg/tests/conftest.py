import numpy as np
import pytest

from entevo.states import random_pure


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def hermitian(rng, d):
    a = rng.standard_normal((d, d)) + 1j * rng.standard_normal((d, d))
    return a + a.conj().T


@pytest.fixture
def random_states():
    return [random_pure(3, s) for s in np.random.SeedSequence(7).spawn(10)]


def pytest_terminal_summary(terminalreporter):
    from acceptance_log import LINES

    if LINES:
        terminalreporter.section("acceptance criteria")
        for line in LINES:
            terminalreporter.write_line(line)
