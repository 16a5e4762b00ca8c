"""Kinetic states and their core column operations.

A kinetic column is sign-compatible when f lies in [0, 1] on positive
velocity cells and in [-1, 0] on negative ones.  The equilibrium of a column
is the signed indicator stacked against v = 0 with the same zero moment; the
deviation functional measures the relative excess of the first v-moment over
that equilibrium and gates all interaction steps.

All reductions that feed conservation checks use a fixed sequential
accumulation order (see :func:`ordered_sum`) so results are bit-reproducible
and the projection can match column masses exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import InvariantViolation, SignStructureError
from .flux import FluxModel
from .grid import GridSpec

_NUDGE_ITERS = 8


def ordered_sum(values, axis=-1):
    """Sequential (left-to-right) sum along ``axis``.

    ``np.sum`` uses pairwise blocking; a running sum pins the accumulation
    order, which the mass-exact projection relies on.
    """
    values = np.asarray(values)
    return np.cumsum(values, axis=axis).take(-1, axis=axis)


@dataclass(eq=False)
class KineticState:
    """Cell averages of the kinetic density on a grid at one time."""

    grid: GridSpec
    t: float
    f: np.ndarray

    def __post_init__(self):
        f = np.asarray(self.f, dtype=float)
        if f.shape != (self.grid.n_x, self.grid.n_v):
            raise ValueError(f"f must have shape (n_x, n_v) = "
                             f"({self.grid.n_x}, {self.grid.n_v}), got {f.shape}")
        self.f = f

    def copy(self) -> "KineticState":
        return KineticState(self.grid, self.t, self.f.copy())


@dataclass(eq=False)
class Moments:
    u: np.ndarray
    entropy_moment: np.ndarray
    flux_moment: np.ndarray | None = None


def cell_sums(state: KineticState) -> np.ndarray:
    """Column masses in cell units: m_i = sum_j f_ij (so u_i = m_i * dv)."""
    return ordered_sum(state.f, axis=1)


def u_profile(state: KineticState) -> np.ndarray:
    return cell_sums(state) * state.grid.dv


def moments(state: KineticState, flux: FluxModel | None = None) -> Moments:
    """Zero, entropy (v-weighted) and optionally flux (A'-weighted) moments."""
    g = state.grid
    u = cell_sums(state) * g.dv
    entropy = ordered_sum(state.f * g.v_centers[None, :], axis=1) * g.dv
    flux_moment = None
    if flux is not None:
        flux_moment = ordered_sum(state.f * flux.a[None, :], axis=1) * g.dv
    return Moments(u=u, entropy_moment=entropy, flux_moment=flux_moment)


def kinetic_entropy(state: KineticState) -> float:
    """Global designated entropy: sum_ij v_j f_ij dv dx."""
    g = state.grid
    cols = ordered_sum(state.f * g.v_centers[None, :], axis=1)
    return float(ordered_sum(cols, axis=0)) * g.dv * g.dx


def total_mass(state: KineticState) -> float:
    g = state.grid
    return float(ordered_sum(cell_sums(state), axis=0)) * g.dv * g.dx


def sign_compatibility_violation(state: KineticState) -> float:
    """Worst excursion of f outside the signed band [0,1] / [-1,0]."""
    g = state.grid
    pos = g.v_centers > 0.0
    f = state.f
    worst = 0.0
    if pos.any():
        fp = f[:, pos]
        worst = max(worst, float(np.max(fp) - 1.0), float(-np.min(fp)))
    if (~pos).any():
        fn = f[:, ~pos]
        worst = max(worst, float(np.max(fn)), float(-1.0 - np.min(fn)))
    return max(worst, 0.0)


def equilibrium_columns(column_cell_sums, n_v: int, j0: int) -> np.ndarray:
    """Canonical equilibrium columns for the given column masses.

    Each column is the cell-averaged signed indicator stacked against the
    zero edge (index ``j0``): full cells are exactly +-1.0 and a single
    fractional cell carries the remainder.  The fractional cell is then
    nudged so that the fixed-order sum of the column reproduces the input
    mass bitwise, which makes the projection mass-exact and idempotent.

    A mass that lands exactly on a cell edge puts a fractional value of 0 in
    the next cell (a no-op), keeping the construction continuous in u.
    """
    m = np.atleast_1d(np.asarray(column_cell_sums, dtype=float))
    n_cols = m.shape[0]
    neg = m < 0.0
    absm = np.abs(m)
    cap = np.where(neg, j0, n_v - j0).astype(float)
    over = absm > cap
    if np.any(over):
        i = int(np.argmax(over))
        raise InvariantViolation(
            f"column {i}: cell mass {m[i]} exceeds the velocity grid range"
        )
    nf = np.floor(absm)
    frac = absm - nf
    nfi = nf.astype(np.int64)

    j = np.arange(n_v)
    # outward offset from the zero edge on each column's sign side
    off = np.where(neg[:, None], (j0 - 1) - j[None, :], j[None, :] - j0)
    pi = ((off >= 0) & (off < nfi[:, None])).astype(float)
    at_frac = off == nfi[:, None]
    pi[at_frac] = np.broadcast_to(frac[:, None], pi.shape)[at_frac]
    pi[neg] *= -1.0

    # nudge the fractional cell so the fixed-order sum matches m exactly
    jc = np.where(neg, j0 - 1 - nfi, j0 + nfi)
    jc = np.clip(jc, 0, n_v - 1)
    rows = np.arange(n_cols)
    for _ in range(_NUDGE_ITERS):
        resid = m - ordered_sum(pi, axis=1)
        act = resid != 0.0
        if not act.any():
            break
        pi[rows[act], jc[act]] += resid[act]
    return pi


def equilibrium_profile(grid: GridSpec, column_cell_sums) -> np.ndarray:
    """Canonical equilibrium columns on a grid (see :func:`equilibrium_columns`)."""
    return equilibrium_columns(column_cell_sums, grid.n_v, grid.j_zero)


def project_equilibrium(state: KineticState, i: int) -> np.ndarray:
    """Equilibrium column at x-cell ``i`` (same zero moment as the column)."""
    m = ordered_sum(state.f[i])
    return equilibrium_profile(state.grid, np.array([m]))[0]


def default_deviation_tol(n_v: int) -> float:
    """Clamp tolerance for the deviation numerator."""
    return 1e-12 * n_v


def _deviation_parts(grid: GridSpec, f: np.ndarray, pi: np.ndarray):
    vc = grid.v_centers[None, :]
    num = ordered_sum((f - pi) * vc, axis=1) * grid.dv
    den = ordered_sum(pi * vc, axis=1) * grid.dv
    return num, den


def _clamp_numerator(num: np.ndarray, tol: float) -> np.ndarray:
    low = float(np.min(num, initial=0.0))
    if low < -tol:
        i = int(np.argmin(num))
        raise SignStructureError(
            f"deviation numerator {low:.3e} < -{tol:.3e} at x-cell {i}: "
            "the first v-moment dropped below its equilibrium value"
        )
    return np.maximum(num, 0.0)


def deviation_profile(state: KineticState, *, pi: np.ndarray | None = None,
                      num_tol: float | None = None) -> np.ndarray:
    """Deviation D per column; 0 where the equilibrium entropy moment is 0."""
    g = state.grid
    if pi is None:
        pi = equilibrium_profile(g, cell_sums(state))
    tol = default_deviation_tol(g.n_v) if num_tol is None else num_tol
    num, den = _deviation_parts(g, state.f, pi)
    num = _clamp_numerator(num, tol)
    out = np.zeros_like(num)
    np.divide(num, den, out=out, where=den != 0.0)
    return out


def deviation(state: KineticState, i: int, num_tol: float | None = None) -> float:
    """Deviation of one column (see :func:`deviation_profile`)."""
    g = state.grid
    col = state.f[i]
    pi = equilibrium_profile(g, np.array([ordered_sum(col)]))[0]
    tol = default_deviation_tol(g.n_v) if num_tol is None else num_tol
    vc = g.v_centers
    num = float(ordered_sum((col - pi) * vc)) * g.dv
    den = float(ordered_sum(pi * vc)) * g.dv
    num = float(_clamp_numerator(np.array([num]), tol)[0])
    return num / den if den != 0.0 else 0.0


def collapse_threshold(epsilon: float) -> float:
    """Critical overlap a* for the stripe family f = -1_[-1,0] + 1_[a,1].

    The family has deviation D(a) = 2 (1 - a^2) / a^2, so projection fires
    (D > epsilon) exactly for a < a* = sqrt(2 / (2 + epsilon)).  The band
    width is delta = 1 - a*, with delta / epsilon -> 1/4 as epsilon -> 0.
    """
    if epsilon < 0:
        raise ValueError("epsilon must be >= 0")
    return float(np.sqrt(2.0 / (2.0 + epsilon)))


def check_nondegeneracy(flux: FluxModel, M: float, tol: float, n_xi: int = 201) -> float:
    """Largest fraction of velocity cells where A' is flat at some level.

    For each direction sigma in {-1, +1} and each level xi on a grid spanning
    the range of A'(v) * sigma over |v| <= M, counts the fraction of cells
    with |A'(v_j) * sigma - xi| < tol and returns the maximum.  Values near 1
    flag a degenerate (piecewise-linear) flux.
    """
    if M <= 0:
        raise ValueError("M must be > 0")
    vc = flux.v_centers
    sel = np.abs(vc) <= M
    if not sel.any():
        return 0.0
    vals_base = flux.a[sel]
    worst = 0.0
    for sigma in (-1.0, 1.0):
        vals = vals_base * sigma
        lo, hi = float(np.min(vals)), float(np.max(vals))
        xi_grid = np.linspace(lo, hi, n_xi) if hi > lo else np.array([lo])
        hits = np.abs(vals[None, :] - xi_grid[:, None]) < tol
        worst = max(worst, float(np.max(np.mean(hits, axis=1))))
    return worst
