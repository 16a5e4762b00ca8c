import numpy as np
import pytest

from kinscl import GridSpec, KineticState, burgers_flux, equilibrium_profile


@pytest.fixture
def small_grid():
    """Coarse symmetric grid with aligned edges at 0 and +-0.5."""
    return GridSpec(-1.0, 1.0, 4, -1.0, 1.0, 8)


def make_state(grid, columns, t=0.0):
    f = np.zeros((grid.n_x, grid.n_v))
    for i, col in enumerate(columns):
        f[i] = col
    return KineticState(grid, t, f)


def riemann_state(grid, uL, uR, x0=0.0):
    u0 = np.where(grid.x_centers < x0, uL, uR)
    return KineticState(grid, 0.0, equilibrium_profile(grid, u0 / grid.dv))


def random_sign_compatible(rng, n_x, grid):
    """Random sign-compatible columns with patchy support."""
    n_v, j0 = grid.n_v, grid.j_zero
    f = rng.uniform(0.0, 1.0, size=(n_x, n_v))
    f[:, :j0] *= -1.0
    keep = rng.uniform(size=(n_x, n_v)) < rng.uniform(0.3, 1.0, size=(n_x, 1))
    return f * keep


@pytest.fixture
def burgers(small_grid):
    return burgers_flux(small_grid)
