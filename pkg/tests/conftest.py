import os
import sys

import numpy as np
import pytest

sys.path.insert(0, os.path.dirname(__file__))

from pt_spectral.potential import PotentialSpec  # noqa: E402
from pt_spectral.spectral import find_eigenvalues, sweep_coefficient  # noqa: E402

CORPUS_SEED = 1
CORPUS_SIZE = 20
CORPUS_LAMBDAS = (0.0, 1 + 2j, 5 - 3j)

# acceptance verdict lines, repeated in the terminal summary so they survive output capture
VERDICTS = []


def pytest_terminal_summary(terminalreporter):
    if VERDICTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(VERDICTS, key=lambda t: t[0]):
            terminalreporter.write_line(line[1])


def random_corpus(n=CORPUS_SIZE, seed=CORPUS_SEED):
    """Real coefficient vectors with m cycling through 3, 4, 5 and a_k uniform in [-2, 2]."""
    rng = np.random.default_rng(seed)
    out = []
    for i in range(n):
        m = 3 + i % 3
        out.append(PotentialSpec(m, tuple(float(x) for x in rng.uniform(-2, 2, m - 1))))
    return out


@pytest.fixture(scope="session")
def corpus():
    return random_corpus()


@pytest.fixture(scope="session")
def corpus_spectra(corpus):
    return [find_eigenvalues(s, 6) for s in corpus]


@pytest.fixture(scope="session")
def gamma_sweep():
    """m = 3, a = (0, a_2) with a_2 over [0, 6] in 61 steps, lowest two eigenvalues."""
    return sweep_coefficient(PotentialSpec(3, (0.0, 0.0)), 2, (0.0, 6.0), 61, 2)
