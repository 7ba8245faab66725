import numpy as np
import pytest

from hypercross.spectral import CoefficientTensor


def random_tensor(rng, dim, degree, nonzero=False, density=1.0):
    axis = np.arange(-degree, degree + 1)
    if nonzero:
        axis = axis[axis != 0]
    keys = np.stack(np.meshgrid(*[axis] * dim, indexing="ij"), -1).reshape(-1, dim)
    keep = rng.random(len(keys)) < density
    keys = keys[keep]
    vals = rng.standard_normal(len(keys)) + 1j * rng.standard_normal(len(keys))
    return CoefficientTensor.from_arrays(keys, vals)


@pytest.fixture
def rng():
    return np.random.default_rng(20240611)


ACCEPTANCE_LINES: list[str] = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)
