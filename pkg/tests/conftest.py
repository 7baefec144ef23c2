import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from zsspec.potential import Potential, random_focusing

settings.register_profile(
    "default",
    max_examples=25,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

finite = st.floats(min_value=-3, max_value=3, allow_nan=False, allow_infinity=False)
complexes = st.builds(complex, finite, finite)


def coefficient_lists(max_K: int = 3):
    return st.integers(0, max_K).flatmap(lambda K: st.lists(complexes, min_size=2 * K + 1, max_size=2 * K + 1))


@pytest.fixture
def rng():
    return np.random.default_rng(20240607)


@pytest.fixture(scope="session")
def small_focusing():
    """Five random focusing trigonometric polynomials with norm 0.5 and K <= 3."""
    gen = np.random.default_rng(11)
    return [random_focusing(gen, int(K), 0.5) for K in (1, 2, 3, 2, 3)]


@pytest.fixture(scope="session")
def zero():
    return Potential.zero()


ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if not ACCEPTANCE_LINES:
        return
    terminalreporter.section("acceptance criteria")
    for n in sorted(ACCEPTANCE_LINES):
        terminalreporter.write_line(ACCEPTANCE_LINES[n])
