import pytest

from qmultinomial.combinat import enumerate_compositions
from qmultinomial.optics import random_unitary
from qmultinomial.transition import Statistics, output_distribution

ACCEPTANCE_LINES = []


@pytest.fixture
def criterion():
    """Record one acceptance line; the summary is printed at session end."""

    def record(label, passed, detail=""):
        ACCEPTANCE_LINES.append(f"{'PASS' if passed else 'FAIL'}  {label}  {detail}".rstrip())
        return passed

    return record


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


GRID_SEEDS = (0, 1, 2)
GRID_K = (2, 3, 4)
GRID_M = (1, 2, 3, 4, 5, 6)


@pytest.fixture(scope="session")
def grid():
    """Boson and distinguishable distributions for every input on a random-unitary grid.

    Maps ``(k, seed, m, n)`` to ``(U, boson_dist, classical_dist)``.
    """
    out = {}
    for k in GRID_K:
        for seed in GRID_SEEDS:
            U = random_unitary(k, seed)
            for m in GRID_M:
                for n in enumerate_compositions(m, k):
                    out[k, seed, m, n] = (
                        U,
                        output_distribution(U, n, Statistics.BOSON),
                        output_distribution(U, n, Statistics.DISTINGUISHABLE),
                    )
    return out
