from fractions import Fraction

import numpy as np
import pytest

from symtwirl.perm_core import Permutation


def P(*images):
    return Permutation(tuple(images))


@pytest.fixture
def rng():
    return np.random.default_rng(0)


def random_density(dim, rng, rank=None, real=False):
    rank = dim if rank is None else rank
    g = rng.normal(size=(dim, rank))
    if not real:
        g = g + 1j * rng.normal(size=(dim, rank))
    rho = g @ g.conj().T
    return rho / np.trace(rho).real


def random_rational_state(dim, rng):
    """B B^T / tr with small-integer B: an exact rational density matrix (as rows of Fractions)."""
    B = rng.integers(-3, 4, size=(dim, dim))
    M = B @ B.T + np.eye(dim, dtype=np.int64)
    tr = int(np.trace(M))
    return [[Fraction(int(v), tr) for v in row] for row in M]


_criteria: dict[str, str] = {}


def pytest_runtest_logreport(report):
    if report.when == "call" or (report.when == "setup" and report.outcome != "passed"):
        for key, value in report.user_properties:
            if key == "criterion":
                _criteria[value] = report.outcome.upper()


def pytest_terminal_summary(terminalreporter):
    if not _criteria:
        return
    terminalreporter.section("acceptance criteria")
    for name in sorted(_criteria, key=lambda s: int(s.split(":")[0])):
        terminalreporter.write_line(f"{_criteria[name]:>6}  criterion {name}")
