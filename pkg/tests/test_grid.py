import numpy as np
import pytest

from kinscl import ConfigError, GridSpec


def test_basic_geometry():
    g = GridSpec(-2.0, 2.0, 8, -1.0, 1.0, 10)
    assert g.dx == pytest.approx(0.5)
    assert g.dv == pytest.approx(0.2)
    assert g.j_zero == 5
    assert g.v_edges[g.j_zero] == 0.0  # exact, by construction
    assert g.x_centers.shape == (8,)
    assert g.v_centers.shape == (10,)
    np.testing.assert_allclose(np.diff(g.v_edges), g.dv)


def test_zero_must_be_an_edge():
    with pytest.raises(ConfigError, match="cell edge"):
        GridSpec(-1.0, 1.0, 4, -1.0, 1.0, 5)


def test_with_zero_edge_bumps_n_v():
    g = GridSpec.with_zero_edge(-1.0, 1.0, 4, -1.0, 1.0, 5)
    assert g.n_v == 6
    assert g.v_edges[g.j_zero] == 0.0


def test_zero_outside_range_rejected():
    with pytest.raises(ConfigError, match="contain v = 0"):
        GridSpec(-1.0, 1.0, 4, 0.5, 1.5, 4)


def test_one_sided_velocity_grid_ok():
    g = GridSpec(-1.0, 1.0, 4, 0.0, 2.0, 10)
    assert g.j_zero == 0
    assert g.v_edges[0] == 0.0


@pytest.mark.parametrize("kwargs,msg", [
    (dict(x_min=1.0, x_max=-1.0, n_x=4, v_min=-1, v_max=1, n_v=4), "x_min"),
    (dict(x_min=-1.0, x_max=1.0, n_x=0, v_min=-1, v_max=1, n_v=4), "n_x"),
    (dict(x_min=-1.0, x_max=1.0, n_x=4, v_min=-1, v_max=1, n_v=1), "n_v"),
    (dict(x_min=-1.0, x_max=1.0, n_x=4, v_min=-1, v_max=1, n_v=4, boundary="wrap"),
     "boundary"),
])
def test_validation_errors(kwargs, msg):
    with pytest.raises(ConfigError, match=msg):
        GridSpec(**kwargs)
