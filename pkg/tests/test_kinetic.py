import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from kinscl import (GridSpec, InvariantViolation, KineticState,
                    SignStructureError, burgers_flux, cell_sums,
                    check_nondegeneracy, collapse_threshold, cubic_flux,
                    deviation, deviation_profile, equilibrium_profile,
                    linear_flux, moments, ordered_sum, project_equilibrium)
from conftest import make_state, random_sign_compatible


# ---------------------------------------------------------------------------
# equilibrium projection

def test_projection_fixed_point(small_grid):
    # exact averages of 1_[0,0.5] on an aligned grid
    col = np.array([0, 0, 0, 0, 1.0, 1.0, 0, 0])
    st_ = make_state(small_grid, [col])
    np.testing.assert_array_equal(project_equilibrium(st_, 0), col)


def test_projection_mixed_positive(small_grid):
    # 1_[0,1] - 1_[-0.5,0]: u = 0.5 -> averages of 1_[0,0.5]
    col = np.array([0, 0, -1.0, -1.0, 1, 1, 1, 1])
    st_ = make_state(small_grid, [col])
    np.testing.assert_allclose(project_equilibrium(st_, 0),
                               [0, 0, 0, 0, 1, 1, 0, 0], atol=1e-15)


def test_projection_mixed_negative(small_grid):
    # -1_[-1,0] + 1_[0.5,1]: u = -0.5 -> averages of -1_[-0.5,0]
    col = np.array([-1.0, -1, -1, -1, 0, 0, 1, 1])
    st_ = make_state(small_grid, [col])
    np.testing.assert_allclose(project_equilibrium(st_, 0),
                               [0, 0, -1, -1, 0, 0, 0, 0], atol=1e-15)


def test_projection_zero_column(small_grid):
    st_ = make_state(small_grid, [np.zeros(8)])
    np.testing.assert_array_equal(project_equilibrium(st_, 0), np.zeros(8))


def test_projection_u_on_cell_edge_is_noop_next_cell(small_grid):
    # u = 0.25 fills exactly one cell; the next cell carries a fractional 0
    pi = equilibrium_profile(small_grid, np.array([1.0]))
    np.testing.assert_allclose(pi[0], [0, 0, 0, 0, 1, 0, 0, 0], atol=1e-15)


def test_projection_overflow_raises(small_grid):
    with pytest.raises(InvariantViolation, match="exceeds"):
        equilibrium_profile(small_grid, np.array([5.0]))


@settings(max_examples=300, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_projection_idempotent_and_mass_exact(seed):
    rng = np.random.default_rng(seed)
    grid = GridSpec(-1.0, 1.0, 64, -1.0, 1.0, int(rng.integers(2, 17)) * 2)
    f = random_sign_compatible(rng, 64, grid)
    m = ordered_sum(f, axis=1)
    pi = equilibrium_profile(grid, m)
    # mass exactness: fixed-order sums agree bitwise after the nudge
    np.testing.assert_array_equal(ordered_sum(pi, axis=1), m)
    # idempotence: projecting a projection reproduces it bitwise
    pi2 = equilibrium_profile(grid, ordered_sum(pi, axis=1))
    np.testing.assert_array_equal(pi2, pi)


@settings(max_examples=200, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_projection_support_and_entropy_inequality(seed):
    rng = np.random.default_rng(seed)
    grid = GridSpec(-1.0, 1.0, 32, -1.0, 1.0, 20)
    f = random_sign_compatible(rng, 32, grid)
    # shrink support to |v| <= 0.6 and check the projection stays inside
    f[:, np.abs(grid.v_centers) > 0.6] = 0.0
    pi = equilibrium_profile(grid, ordered_sum(f, axis=1))
    assert np.all(pi[:, np.abs(grid.v_centers) > 0.6] == 0.0)
    # per-column entropy inequality for the designated entropy (eta' = v)
    num = ordered_sum((f - pi) * grid.v_centers[None, :], axis=1) * grid.dv
    assert num.min() > -1e-12 * grid.n_v


# ---------------------------------------------------------------------------
# deviation

def test_deviation_of_equilibrium_is_zero(small_grid):
    pi = equilibrium_profile(small_grid, np.array([1.7]))
    st_ = make_state(small_grid, pi)
    assert deviation(st_, 0) == 0.0


def test_deviation_stripe_family_closed_form(small_grid):
    # -1_[-1,0] + 1_[a,1] with a = 0.5: D = 2(1 - a^2)/a^2 = 6
    col = np.array([-1.0, -1, -1, -1, 0, 0, 1, 1])
    st_ = make_state(small_grid, [col])
    assert deviation(st_, 0) == pytest.approx(6.0, rel=1e-13)


def test_deviation_zero_mass_convention(small_grid):
    # 1_[0.5,1] - 1_[-1,-0.5]: u = 0, defined as 0
    col = np.array([-1.0, -1, 0, 0, 0, 0, 1, 1])
    st_ = make_state(small_grid, [col])
    assert deviation(st_, 0) == 0.0


def test_deviation_rejects_sign_violation(small_grid):
    col = np.zeros(8)
    col[4] = 2.0  # not a sign-compatible value; mass sits below equilibrium
    st_ = make_state(small_grid, [col])
    with pytest.raises(SignStructureError):
        deviation(st_, 0)


@settings(max_examples=150, deadline=None)
@given(st.integers(0, 10 ** 9))
def test_deviation_zero_implies_equilibrium(seed):
    rng = np.random.default_rng(seed)
    grid = GridSpec(-1.0, 1.0, 16, -1.0, 1.0, 24)
    f = random_sign_compatible(rng, 16, grid)
    st_ = KineticState(grid, 0.0, f)
    dev = deviation_profile(st_)
    pi = equilibrium_profile(grid, cell_sums(st_))
    num = ordered_sum((f - pi) * grid.v_centers[None, :], axis=1) * grid.dv
    for i in range(16):
        if dev[i] == 0.0 and abs(cell_sums(st_)[i]) * grid.dv > 0.05:
            # columns indistinguishable from equilibrium up to the numerator bound
            assert np.max(np.abs(f[i] - pi[i])) <= 2 * max(num[i], 1e-12 * grid.n_v) / grid.dv ** 2


# ---------------------------------------------------------------------------
# moments

def test_moments_zero_state(small_grid):
    st_ = make_state(small_grid, np.zeros((4, 8)))
    mom = moments(st_)
    np.testing.assert_array_equal(mom.u, np.zeros(4))
    np.testing.assert_array_equal(mom.entropy_moment, np.zeros(4))


def test_moments_entropy_of_equilibrium():
    grid = GridSpec(-1.0, 1.0, 1, -1.0, 1.0, 20)
    c = 0.53
    st_ = KineticState(grid, 0.0, equilibrium_profile(grid, np.array([c / grid.dv])))
    mom = moments(st_)
    assert mom.u[0] == pytest.approx(c, abs=1e-14)
    assert mom.entropy_moment[0] == pytest.approx(c * c / 2, abs=grid.dv ** 2 / 4)


def test_moments_u_reproduced_exactly_after_projection(small_grid):
    rng = np.random.default_rng(7)
    f = random_sign_compatible(rng, 4, small_grid)
    st_ = KineticState(small_grid, 0.0, f)
    u = moments(st_).u
    proj = KineticState(small_grid, 0.0,
                        equilibrium_profile(small_grid, cell_sums(st_)))
    np.testing.assert_array_equal(moments(proj).u, u)


def test_moments_flux_moment(small_grid, burgers):
    pi = equilibrium_profile(small_grid, np.array([2.0]))
    st_ = make_state(small_grid, pi)
    mom = moments(st_, burgers)
    # for Burgers the flux moment equals the entropy moment (A' = v)
    np.testing.assert_array_equal(mom.flux_moment, mom.entropy_moment)


# ---------------------------------------------------------------------------
# collapse threshold

def test_collapse_threshold_limit():
    assert collapse_threshold(0.0) == 1.0


def test_collapse_threshold_value_vs_bisection():
    eps = 0.1
    a_star = collapse_threshold(eps)
    assert a_star == pytest.approx(0.9759000729485332, abs=1e-15)
    # independent oracle: bisection on the closed-form deviation of the family
    dev = lambda a: 2 * (1 - a * a) / (a * a)
    lo, hi = 0.5, 1.0
    for _ in range(80):
        mid = 0.5 * (lo + hi)
        if dev(mid) > eps:
            lo = mid
        else:
            hi = mid
    assert a_star == pytest.approx(0.5 * (lo + hi), abs=1e-12)


def test_collapse_threshold_small_eps_slope():
    eps = 1e-3
    delta = 1.0 - collapse_threshold(eps)
    assert delta / eps == pytest.approx(0.25, abs=1e-4)


# ---------------------------------------------------------------------------
# non-degeneracy

def test_nondegeneracy_burgers():
    grid = GridSpec(-1.0, 1.0, 1, -1.0, 1.0, 40)
    frac = check_nondegeneracy(burgers_flux(grid), M=1.0, tol=grid.dv)
    # level sets of A'(v) = v are points: at most 2 cells per level
    assert frac <= 2 * grid.dv / 2.0 + 1e-12


def test_nondegeneracy_linear_flux_degenerate():
    grid = GridSpec(-1.0, 1.0, 1, -1.0, 1.0, 40)
    assert check_nondegeneracy(linear_flux(grid, 0.3), M=1.0, tol=1e-6) == 1.0


def test_nondegeneracy_cubic_vanishes_with_tol():
    grid = GridSpec(-1.0, 1.0, 1, -1.0, 1.0, 200)
    fl = cubic_flux(grid)
    fracs = [check_nondegeneracy(fl, M=1.0, tol=tol) for tol in (1e-1, 1e-2, 1e-3)]
    assert fracs[0] > fracs[1] > fracs[2]
    # worst level sits on the flat spot at v = 0: |{|v|^3 < tol}| ~ 2 tol^(1/3)
    for tol, frac in zip((1e-1, 1e-2, 1e-3), fracs):
        assert frac <= 1.2 * tol ** (1.0 / 3.0) + 2 * grid.dv
