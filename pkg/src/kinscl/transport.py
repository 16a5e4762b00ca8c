"""Free streaming of kinetic rows at their sampled velocities.

Each velocity row is translated by A'(v_j) * dt using a first-order
conservative remap: an integer cell shift plus a two-cell split for the
fractional remainder.  The remap is a convex combination of donor cells, so
it preserves per-row extrema and sign structure; with an integer shift
(theta = 0) it is an exact copy.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .flux import FluxModel
from .grid import GridSpec
from .kinetic import KineticState


@dataclass(frozen=True, eq=False)
class ShiftPlan:
    """Per-row decomposition of the shift A'(v_j) dt / dx into k + theta."""

    k: np.ndarray       # integer cell offsets, shape (n_v,)
    theta: np.ndarray   # fractional parts in [0, 1), shape (n_v,)
    boundary: str


def shift_plan(grid: GridSpec, flux: FluxModel, dt: float) -> ShiftPlan:
    s = flux.a * (dt / grid.dx)
    k = np.floor(s)
    theta = s - k
    return ShiftPlan(k.astype(np.int64), theta, grid.boundary)


def advect(state: KineticState, flux: FluxModel, dt: float) -> KineticState:
    """Translate every row by its velocity; returns a new state at t + dt."""
    if dt <= 0:
        raise ValueError("dt must be > 0")
    g = state.grid
    plan = shift_plan(g, flux, dt)
    f = state.f
    n_x, n_v = f.shape
    src1 = np.arange(n_x)[:, None] - plan.k[None, :]
    src2 = src1 - 1
    cols = np.broadcast_to(np.arange(n_v)[None, :], (n_x, n_v))
    if g.boundary == "periodic":
        f1 = f[src1 % n_x, cols]
        f2 = f[src2 % n_x, cols]
    else:  # outflow: ghost cells are vacuum
        in1 = (src1 >= 0) & (src1 < n_x)
        in2 = (src2 >= 0) & (src2 < n_x)
        f1 = np.where(in1, f[np.clip(src1, 0, n_x - 1), cols], 0.0)
        f2 = np.where(in2, f[np.clip(src2, 0, n_x - 1), cols], 0.0)
    th = plan.theta[None, :]
    return KineticState(g, state.t + dt, (1.0 - th) * f1 + th * f2)
