import numpy as np
import pytest

from purikit.bell_core import random_density, random_x_state

ACCEPTANCE_RESULTS = []


@pytest.fixture(scope="session")
def general_states():
    return [random_density(seed, "general") for seed in range(1000)]


@pytest.fixture(scope="session")
def x_states():
    return [random_x_state(seed) for seed in range(1000)]


def haar_unitary(rng, n=2):
    z = rng.standard_normal((n, n)) + 1j * rng.standard_normal((n, n))
    q, r = np.linalg.qr(z)
    return q * (np.diag(r) / np.abs(np.diag(r)))


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_RESULTS:
        return
    terminalreporter.section("acceptance criteria")
    for number, title, ok, detail in sorted(ACCEPTANCE_RESULTS):
        status = "PASS" if ok else "FAIL"
        terminalreporter.write_line(f"[{status}] {number}. {title}: {detail}")
