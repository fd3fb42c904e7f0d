import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from spingeo.pauli import decompose
from spingeo.states import bell_state, random_density_matrix

settings.register_profile(
    "default",
    deadline=None,
    max_examples=60,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

ACCEPTANCE_LINES = []


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for line in ACCEPTANCE_LINES:
            terminalreporter.write_line(line)


@pytest.fixture
def rng():
    return np.random.default_rng(12345)


@pytest.fixture
def singlet():
    return bell_state("psi-")


@pytest.fixture
def singlet_d():
    return decompose(bell_state("psi-"))


seeds = st.integers(min_value=0, max_value=2**32 - 1)
angles = st.floats(min_value=0.0, max_value=2 * np.pi, allow_nan=False)
lam_ts = st.floats(min_value=0.0, max_value=3.0, allow_nan=False)


@st.composite
def density_matrices(draw, rank=4):
    return random_density_matrix(np.random.default_rng(draw(seeds)), rank=rank)
