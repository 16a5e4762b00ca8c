"""Analytic reference solutions.

Exact entropy solutions of convex-flux Riemann problems, the perturbed
stationary-shock ("stripe") kinetic initial data for Burgers, and the
self-similar approximate limit it converges to.  These evaluate closed-form
expressions; the grid schemes are checked against them, never the reverse.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass

import numpy as np
from scipy.integrate import quad

from .errors import ConfigError
from .flux import FluxModel
from .grid import GridSpec
from .kinetic import KineticState

_GAUSS_NODES, _GAUSS_WEIGHTS = np.polynomial.legendre.leggauss(4)


@dataclass(frozen=True, eq=False)
class RiemannProblem:
    """Two-state initial data u = uL for x < x0, uR for x > x0."""

    uL: float
    uR: float
    x0: float
    flux: FluxModel

    def __post_init__(self):
        if not self.flux.convex:
            raise ConfigError("exact Riemann solutions require a convex flux")
        lo, hi = self.flux.v_edges[0], self.flux.v_edges[-1]
        for name, u in (("uL", self.uL), ("uR", self.uR)):
            if not lo <= u <= hi:
                raise ConfigError(f"{name}={u} outside sampled flux range [{lo}, {hi}]")


def _aprime_inverse(flux: FluxModel, xi: np.ndarray) -> np.ndarray:
    a = flux.a
    if np.any(np.diff(a) < -1e-12 * (1.0 + np.max(np.abs(a)))):
        raise ConfigError("A' must be nondecreasing for the rarefaction branch")
    a_mono = np.maximum.accumulate(a)
    return np.interp(xi, a_mono, flux.v_centers)


def riemann_exact(problem: RiemannProblem, x, t: float):
    """Entropy solution of the Riemann problem at positions x, time t > 0."""
    if t <= 0:
        raise ValueError("t must be > 0")
    x = np.asarray(x, dtype=float)
    uL, uR, x0 = problem.uL, problem.uR, problem.x0
    if uL == uR:
        return np.full_like(x, uL)
    if uL > uR:  # shock at the Rankine-Hugoniot speed
        s = float((problem.flux.A_at(uL) - problem.flux.A_at(uR)) / (uL - uR))
        return np.where(x - x0 < s * t, uL, uR)
    # rarefaction fan
    u = _aprime_inverse(problem.flux, (x - x0) / t)
    return np.clip(u, uL, uR)


def stripe_initial_state(grid: GridSpec, h: float, delta: float) -> KineticState:
    """Perturbed stationary-shock kinetic data for Burgers.

    f = 1 on {v in [0, 1], x <= max(0, (v - (1 - delta)) h)} and
    f = -1 on {v in [-1, 0], x >= min(0, (v + (1 - delta)) h)}; the two
    wedges of width delta lean into the wrong side of the shock.  Cell
    averages are exact in x and use 4-point Gauss quadrature in v.
    """
    if not h > 0:
        raise ConfigError("stripe h must be > 0")
    if not 0.0 < delta < 1.0:
        raise ConfigError("stripe delta must lie in (0, 1)")
    if grid.v_edges[0] > -1.0 or grid.v_edges[-1] < 1.0:
        raise ConfigError("stripe data needs the velocity grid to cover [-1, 1]")
    if grid.dx > delta * h / 4.0:
        warnings.warn(
            f"grid under-resolves the stripe: dx = {grid.dx} > delta*h/4 = "
            f"{delta * h / 4.0}", stacklevel=2)
    one = 1.0 - delta
    # Gauss nodes per velocity cell, shape (n_v, 4)
    vg = grid.v_centers[:, None] + 0.5 * grid.dv * _GAUSS_NODES[None, :]
    x_lo = grid.x_edges[:-1][:, None, None]
    x_hi = grid.x_edges[1:][:, None, None]

    pos_band = (vg >= 0.0) & (vg <= 1.0)
    thr_pos = np.maximum(0.0, (vg - one) * h)
    cover_pos = np.clip((thr_pos[None, :, :] - x_lo) / grid.dx, 0.0, 1.0)
    cover_pos = cover_pos * pos_band[None, :, :]

    neg_band = (vg >= -1.0) & (vg <= 0.0)
    thr_neg = np.minimum(0.0, (vg + one) * h)
    cover_neg = np.clip((x_hi - thr_neg[None, :, :]) / grid.dx, 0.0, 1.0)
    cover_neg = cover_neg * neg_band[None, :, :]

    w = 0.5 * _GAUSS_WEIGHTS[None, None, :]
    f = np.sum((cover_pos - cover_neg) * w, axis=2)
    return KineticState(grid, 0.0, f)


def _weight(v, one: float):
    """Occupied fraction (v - (1 - delta)) / (2 v - (1 - delta)) on v >= 1 - delta."""
    return (v - one) / (2.0 * v - one)


def limit_density(delta: float, x: float, t: float, v):
    """Self-similar limit density f(x/t, v) of the perturbed shock.

    Piecewise in xi = x/t: outside |xi| >= 1 the pure shock indicators; in
    the leak bands the fast velocity cells carry the partial weight
    (v - (1-delta)) / (2v - (1-delta)) (mirrored with a sign flip for
    x < 0, keeping the values sign-compatible).
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    if t <= 0:
        raise ValueError("t must be > 0")
    v = np.asarray(v, dtype=float)
    one = 1.0 - delta
    xi = x / t
    neg_ind = np.where((v >= -1.0) & (v <= 0.0), -1.0, 0.0)
    pos_ind = np.where((v >= 0.0) & (v <= 1.0), 1.0, 0.0)
    if xi >= 0.0:
        if xi >= 1.0:
            return neg_ind
        lo = max(xi, one)
        band = (v >= lo) & (v <= 1.0)
        return neg_ind + np.where(band, _weight(np.where(band, v, 1.0), one), 0.0)
    if xi <= -1.0:
        return pos_ind
    hi = min(xi, -one)
    band = (v >= -1.0) & (v <= hi)
    # mirror of the positive branch: negative-side values stay in [-1, 0]
    return pos_ind - np.where(band, _weight(np.where(band, -v, 1.0), one), 0.0)


def limit_u(delta: float, xi: float) -> float:
    """Zero moment of the self-similar limit at similarity variable xi.

    Adaptive quadrature of the leak-band weight; exhibits the mass leak:
    |u| < 1 strictly inside the bands |xi| in (0, 1).
    """
    if not 0.0 < delta < 1.0:
        raise ValueError("delta must lie in (0, 1)")
    one = 1.0 - delta

    def band_mass(lo: float) -> float:
        val, _ = quad(lambda v: _weight(v, one), lo, 1.0)
        return val

    if xi >= 1.0:
        return -1.0
    if xi >= one:
        return -1.0 + band_mass(xi)
    if xi >= 0.0:
        return -1.0 + band_mass(one)
    if xi <= -1.0:
        return 1.0
    if xi <= -one:
        return 1.0 - band_mass(-xi)
    return 1.0 - band_mass(one)


@dataclass(frozen=True)
class SelfSimilarLimit:
    """Convenience wrapper around the self-similar limit formulas."""

    delta: float

    def __post_init__(self):
        if not 0.0 < self.delta < 1.0:
            raise ConfigError("delta must lie in (0, 1)")

    def density(self, x: float, t: float, v):
        return limit_density(self.delta, x, t, v)

    def u(self, xi: float) -> float:
        return limit_u(self.delta, xi)
