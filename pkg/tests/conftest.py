import pytest
from hypothesis import HealthCheck, settings

from amalgam_lab.funcrep import GridSpec, default_corpus, make_gaussian, smooth_corpus

settings.register_profile(
    "lab",
    max_examples=40,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
    derandomize=True,
)
settings.load_profile("lab")

# reference values from scripts/compute_oracles.py (adaptive quadrature on the closed forms)
G_STAR = 1.518849842535496  # ||exp(-pi x^2)||_{(L^2_{poly1}, l^1)} on [-16, 16)
A_STAR = 2.558891398017852  # ||exp(-pi x^2)||_A with p=q=r=2, both weights poly(1)


@pytest.fixture(scope="session")
def grid():
    return GridSpec(16, 256)


@pytest.fixture(scope="session")
def small_grid():
    return GridSpec(4, 16)


@pytest.fixture(scope="session")
def corpus(grid):
    return default_corpus(grid)


@pytest.fixture(scope="session")
def smooth(grid):
    return smooth_corpus(grid)


@pytest.fixture(scope="session")
def gauss(grid):
    return make_gaussian(grid)
