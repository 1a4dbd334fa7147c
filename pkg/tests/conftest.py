import numpy as np
import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from simplicial_flows import build_complex
from simplicial_flows import catalog

settings.register_profile("default", max_examples=40, deadline=None,
                          suppress_health_check=[HealthCheck.too_slow])
settings.load_profile("default")


def random_complex(rng, max_vertices=8, max_dim=3, max_top=6):
    """Closure of a few random simplices on at most ``max_vertices`` vertices."""
    nv = int(rng.integers(1, max_vertices + 1))
    tops = set()
    for _ in range(int(rng.integers(1, max_top + 1))):
        k = int(rng.integers(1, min(max_dim + 1, nv) + 1))
        tops.add(tuple(sorted(rng.choice(np.arange(1, nv + 1), size=k, replace=False).tolist())))
    # drop tops contained in other tops so the input has no redundant entries
    tops = [s for s in tops if not any(set(s) < set(t) for t in tops)]
    return build_complex(sorted(tops))


@st.composite
def complexes(draw, max_vertices=7, max_dim=3, max_top=5):
    seed = draw(st.integers(0, 2**32 - 1))
    return random_complex(np.random.default_rng(seed), max_vertices, max_dim, max_top)


@pytest.fixture
def diamond():
    return catalog.diamond()


@pytest.fixture
def diamond_right():
    return catalog.diamond("right")


@pytest.fixture
def tetra():
    return catalog.tetrahedron()


# acceptance lines collected by tests/test_acceptance.py
ACCEPTANCE_LINES: dict[int, str] = {}


def pytest_terminal_summary(terminalreporter):
    if ACCEPTANCE_LINES:
        terminalreporter.section("acceptance criteria")
        for k in sorted(ACCEPTANCE_LINES):
            terminalreporter.write_line(ACCEPTANCE_LINES[k])
