import numpy as np
import pytest

from clx import fixtures


@pytest.fixture
def lap():
    return fixtures.laplacian_of


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


def random_digraph_matrix(rng, n, density=0.5, max_phase=89.0, strongly_connected=False):
    """Random complex adjacency with admissible edge phases."""
    mask = rng.random((n, n)) < density
    np.fill_diagonal(mask, False)
    if strongly_connected and n > 1:
        perm = rng.permutation(n)
        for a, b in zip(perm, np.roll(perm, -1)):
            mask[a, b] = True
    r = rng.uniform(0.2, 5.0, (n, n))
    beta = np.radians(rng.uniform(-max_phase, max_phase, (n, n)))
    return np.where(mask, r * np.exp(1j * beta), 0)


def laplacian_from(A):
    return np.diag(A.sum(axis=1)) - A


ACCEPTANCE_RESULTS = []


def record_acceptance(number, passed, detail):
    line = f"acceptance criterion {number}: {'PASS' if passed else 'FAIL'} - {detail}"
    ACCEPTANCE_RESULTS.append(line)
    print(line)


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_RESULTS:
        terminalreporter.section("acceptance criteria")
        for line in sorted(ACCEPTANCE_RESULTS):
            terminalreporter.write_line(line)
