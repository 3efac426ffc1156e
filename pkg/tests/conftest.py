import os

import pytest
from hypothesis import HealthCheck, settings

settings.register_profile(
    "default", deadline=None, max_examples=60,
    suppress_health_check=[HealthCheck.too_slow])
settings.load_profile(os.environ.get("HYPOTHESIS_PROFILE", "default"))


@pytest.fixture(scope="session")
def bubble_solve():
    from fracckn.constants import Parameters
    from fracckn.solver import solve_ground_state
    from fracckn.spectral import Grid
    params = Parameters(3, 0.5, 0.0, 0.0)
    return params, solve_ground_state(params, Grid(20.0, 2048))


@pytest.fixture(scope="session")
def radial_solve():
    """A point with alpha >= 0 and p well above 2."""
    from fracckn.constants import Parameters
    from fracckn.solver import solve_ground_state
    from fracckn.spectral import Grid
    params = Parameters(3, 0.5, 0.3, 0.4)
    return params, solve_ground_state(params, Grid(36.0, 2048))


@pytest.fixture(scope="session")
def broken_solve():
    from fracckn.constants import Parameters
    from fracckn.solver import solve_ground_state
    from fracckn.spectral import Grid
    params = Parameters(3, 0.5, -0.9, -0.89)
    return params, solve_ground_state(params, Grid(20.0, 4096))
