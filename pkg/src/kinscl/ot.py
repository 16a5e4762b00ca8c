"""Optimal-transport diagnostics and structural checks.

These utilities verify, at grid resolution, the structural facts the
schemes rely on: the monotone rearrangement between a column and its
equilibrium, the convexity inequality behind per-column entropy decay, the
nonnegative defect measure reconstructed across an interaction, cumulative
interaction budgets, and the per-column flux error together with its
two-term minimal representation.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import MassMismatchError, SignStructureError
from .flux import FluxModel
from .kinetic import (KineticState, cell_sums, default_deviation_tol,
                      equilibrium_columns, equilibrium_profile, ordered_sum,
                      _clamp_numerator, _deviation_parts)
from .schemes import DiagnosticsLedger


# ---------------------------------------------------------------------------
# cumulative distributions and monotone maps (nonnegative columns, v >= 0)

def cdf(column, v_edges, *, tol: float = 1e-12) -> np.ndarray:
    """Cumulative mass at cell edges for a nonnegative column on v >= 0.

    Negative-side columns should be reflected (v -> -v, sign flip) first.
    """
    column = np.asarray(column, dtype=float)
    v_edges = np.asarray(v_edges, dtype=float)
    if column.ndim != 1 or v_edges.shape != (column.shape[0] + 1,):
        raise ValueError("column and v_edges shapes are inconsistent")
    if np.min(column, initial=0.0) < -tol:
        raise SignStructureError("cdf requires a nonnegative column")
    below = v_edges[1:] <= 0.0
    if np.any(np.abs(column[below]) > tol):
        raise SignStructureError("cdf requires support in v >= 0")
    dv = np.diff(v_edges)
    return np.concatenate([[0.0], np.cumsum(column * dv)])


def _quantile(F_edges: np.ndarray, v_edges: np.ndarray, q: np.ndarray) -> np.ndarray:
    """Generalized inverse inf{v : F(v) > q} of a piecewise-linear cumulative."""
    j = np.searchsorted(F_edges, q, side="right") - 1
    j = np.clip(j, 0, F_edges.shape[0] - 2)
    df = F_edges[j + 1] - F_edges[j]
    width = v_edges[j + 1] - v_edges[j]
    frac = np.zeros_like(q, dtype=float)
    np.divide(q - F_edges[j], df, out=frac, where=df > 0)
    return v_edges[j] + np.clip(frac, 0.0, 1.0) * width


@dataclass(eq=False)
class MonotoneMap:
    """Monotone rearrangement between two equal-mass columns on v >= 0."""

    source: np.ndarray   # density the map pushes forward
    target: np.ndarray
    nodes: np.ndarray    # source positions of the mid-quantile nodes
    tau: np.ndarray      # destinations of those nodes, nondecreasing
    w1: float            # int |tau(v) - v| source dv (mid-quantile rule)


def monotone_map(f0_column, f_column, v_edges, *, n_nodes: int | None = None,
                 mass_tol: float = 1e-9) -> MonotoneMap:
    """Quantile coupling tau = F^{-1} o F0 between equal-mass columns."""
    F0 = cdf(f0_column, v_edges)
    F1 = cdf(f_column, v_edges)
    mass0, mass1 = float(F0[-1]), float(F1[-1])
    if abs(mass0 - mass1) > mass_tol * max(1.0, abs(mass0), abs(mass1)):
        raise MassMismatchError(f"column masses differ: {mass0} vs {mass1}")
    n = int(n_nodes) if n_nodes else (len(v_edges) - 1)
    q = (np.arange(n) + 0.5) / n * mass0
    nodes = _quantile(F0, v_edges, q)
    tau = _quantile(F1, v_edges, q)
    w1 = float(np.mean(np.abs(tau - nodes))) * mass0 if mass0 != 0.0 else 0.0
    return MonotoneMap(source=np.asarray(f0_column, dtype=float),
                       target=np.asarray(f_column, dtype=float),
                       nodes=nodes, tau=tau, w1=w1)


# ---------------------------------------------------------------------------
# convexity inequality for signed indicator pairs

def _merged_measure(intervals) -> tuple[list, float]:
    ivs = sorted((float(a), float(b)) for a, b in intervals)
    merged: list = []
    for a, b in ivs:
        if b < a:
            raise ValueError(f"malformed interval ({a}, {b})")
        if merged and a <= merged[-1][1]:
            merged[-1][1] = max(merged[-1][1], b)
        else:
            merged.append([a, b])
    return merged, sum(b - a for a, b in merged)


def check_convexity_lemma(a1_intervals, a2_intervals, eta, *, tol: float = 1e-9) -> bool:
    """Check int_0^{|A1|-|A2|} eta' <= int eta' (1_{A1} - 1_{A2}).

    ``A1`` is a list of intervals in [0, inf), ``A2`` in (-inf, 0], and
    ``eta`` a convex callable.  Both sides are evaluated exactly through
    differences of eta.  The left side is the oriented integral from 0 to
    the signed length difference, i.e. eta(s) - eta(0); the unsigned-set
    version of the left side is false for s < 0 (both sides must shift
    equally under subtracting a supporting line, which pins the sign).
    """
    m1, len1 = _merged_measure(a1_intervals)
    m2, len2 = _merged_measure(a2_intervals)
    if any(a < -tol for a, _ in m1):
        raise ValueError("A1 intervals must lie in [0, +inf)")
    if any(b > tol for _, b in m2):
        raise ValueError("A2 intervals must lie in (-inf, 0]")
    s = len1 - len2
    lhs = eta(s) - eta(0.0)
    rhs = sum(eta(b) - eta(a) for a, b in m1) - sum(eta(b) - eta(a) for a, b in m2)
    scale = 1.0 + abs(lhs) + abs(rhs)
    return lhs <= rhs + tol * scale


# ---------------------------------------------------------------------------
# defect measure across an interaction jump

@dataclass(eq=False)
class MeasureField:
    """Defect measure density at velocity edges, one row per x-cell.

    Reconstructed from a jump r = post - pre so that r = d/dv m with
    m = 0 below the support: admissible interactions give m >= 0, and the
    top edge vanishes because the jump carries no zero moment.
    """

    m: np.ndarray            # (n_x, n_v + 1)
    total_variation: float

    @property
    def min_edge(self) -> float:
        return float(np.min(self.m))

    @property
    def top_edge_max_abs(self) -> float:
        return float(np.max(np.abs(self.m[:, -1])))


def reconstruct_m(pre_collapse: KineticState, post_collapse: KineticState) -> MeasureField:
    """Integrate the interaction jump in v to recover the defect measure."""
    if pre_collapse.grid != post_collapse.grid:
        raise ValueError("states live on different grids")
    if abs(pre_collapse.t - post_collapse.t) > 1e-12 * max(1.0, abs(post_collapse.t)):
        raise ValueError("states must be a jump pair at one time")
    g = pre_collapse.grid
    r = post_collapse.f - pre_collapse.f
    inner = np.cumsum(r, axis=1) * g.dv
    m = np.concatenate([np.zeros((g.n_x, 1)), inner], axis=1)
    absm = np.abs(m)
    per_col = g.dv * (np.sum(absm[:, 1:-1], axis=1)
                      + 0.5 * (absm[:, 0] + absm[:, -1]))
    tv = float(np.sum(per_col)) * g.dx
    return MeasureField(m=m, total_variation=tv)


# ---------------------------------------------------------------------------
# cumulative interaction budgets

@dataclass(frozen=True)
class EntropyBudgets:
    """Windowed sums of the per-step interaction records."""

    w1_total: float                   # transport cost shed at interactions
    equilibrium_entropy_total: float  # entropy mass of the interacting set
    collapsed_measure_total: float    # spatial measure of the interacting set


def entropy_budgets(ledger: DiagnosticsLedger, t_min: float = -np.inf,
                    t_max: float = np.inf) -> EntropyBudgets:
    w1 = ent = meas = 0.0
    for report in ledger.reports:
        if t_min <= report.t <= t_max:
            w1 += report.w1_drop
            ent += report.collapsed_entropy_mass
            meas += report.collapsed_measure
    return EntropyBudgets(w1, ent, meas)


# ---------------------------------------------------------------------------
# per-column flux error and minimal representation

@dataclass(eq=False)
class FluxErrorField:
    """Relative first-moment and flux-moment errors per x-cell.

    Cells with |u| below the floor are skipped (masked out of ``active``)
    and counted; the ratios there are 0/0.
    """

    entropy_rel: np.ndarray
    flux_rel: np.ndarray
    active: np.ndarray
    skipped: int

    @property
    def max_abs_entropy(self) -> float:
        return float(np.max(np.abs(self.entropy_rel[self.active]), initial=0.0))

    @property
    def max_abs_flux(self) -> float:
        return float(np.max(np.abs(self.flux_rel[self.active]), initial=0.0))


def flux_error_field(state: KineticState, flux: FluxModel, *,
                     u_floor: float | None = None,
                     num_tol: float | None = None) -> FluxErrorField:
    """Relative errors (int v (f - Pi) dv, int v A' (f - Pi) dv) / (u^2 / 2)."""
    g = state.grid
    tol = default_deviation_tol(g.n_v) if num_tol is None else num_tol
    m = cell_sums(state)
    u = m * g.dv
    pi = equilibrium_profile(g, m)
    num, _ = _deviation_parts(g, state.f, pi)
    num = _clamp_numerator(num, tol)
    weights = (g.v_centers * flux.a)[None, :]
    num_flux = ordered_sum((state.f - pi) * weights, axis=1) * g.dv
    scale = float(np.max(np.abs(u), initial=0.0))
    floor = (1e-6 * scale) if u_floor is None else u_floor
    active = np.abs(u) >= max(floor, np.finfo(float).tiny)
    eta_u = 0.5 * u * u
    e1 = np.zeros_like(u)
    e2 = np.zeros_like(u)
    np.divide(num, eta_u, out=e1, where=active)
    np.divide(num_flux, eta_u, out=e2, where=active)
    return FluxErrorField(entropy_rel=e1, flux_rel=e2, active=active,
                          skipped=int(np.count_nonzero(~active)))


@dataclass(eq=False)
class MVRepresentation:
    """Two-term minimal representation of the disequilibrium of a column.

    ``alpha`` solves the 2x2 Gram system of {1, A'} on [0, M] against the
    moments of f - Pi; the measure built from the profile
    f_min = alpha_0 + alpha_1 A' has mass |alpha_1| TV(A') + |f_min(M)|.
    """

    u: float
    alpha: np.ndarray
    fmin_at_M: float
    mass_m: float
    residual: float


def _gram_matrix(flux: FluxModel, M: float) -> np.ndarray:
    e = flux.v_edges
    w = np.clip(np.minimum(e[1:], M) - np.maximum(e[:-1], 0.0), 0.0, None)
    a = flux.a
    return np.array([[np.sum(w), np.sum(a * w)],
                     [np.sum(a * w), np.sum(a * a * w)]])


def _a_tv_and_end(flux: FluxModel, M: float):
    """Total variation of A' over [0, M] and its value at M."""
    vc = flux.v_centers
    inside = (vc > 0.0) & (vc < M)
    a_par = np.concatenate([[flux.a_at(0.0)], flux.a[inside], [flux.a_at(M)]])
    return float(np.sum(np.abs(np.diff(a_par)))), float(a_par[-1])


def mv_representation(column, flux: FluxModel, M: float, *,
                      tol: float = 1e-9) -> MVRepresentation:
    """Minimal representation for one nonnegative column supported in [0, M]."""
    column = np.asarray(column, dtype=float)
    e = flux.v_edges
    if column.shape != (flux.n_v,):
        raise ValueError("column does not match the flux sampling")
    vc = flux.v_centers
    outside = (vc < 0.0) | (vc > M)
    if np.any(np.abs(column[outside]) > tol):
        raise SignStructureError(f"column must be supported in [0, {M}]")
    dv = float(e[1] - e[0])
    m = float(ordered_sum(column))
    u = m * dv
    if m < -tol:
        raise SignStructureError("column must have nonnegative mass")
    j0 = int(round(-e[0] / dv))
    pi = equilibrium_columns(np.array([m]), flux.n_v, j0)[0]
    gram = _gram_matrix(flux, M)
    det = np.linalg.det(gram)
    if abs(det) <= 1e-12 * max(1.0, abs(gram[0, 0] * gram[1, 1])):
        raise ValueError(f"degenerate flux {flux.name!r}: Gram matrix of "
                         "{1, A'} on [0, M] is singular")
    diff = column - pi
    b = np.array([float(ordered_sum(diff)) * dv,
                  float(ordered_sum(diff * flux.a)) * dv])
    alpha = np.linalg.solve(gram, b)
    residual = float(np.max(np.abs(gram @ alpha - b)))
    a_tv, a_end = _a_tv_and_end(flux, M)
    fmin_at_M = float(alpha[0] + alpha[1] * a_end)
    mass_m = abs(alpha[1]) * a_tv + abs(fmin_at_M)
    return MVRepresentation(u=u, alpha=alpha, fmin_at_M=fmin_at_M,
                            mass_m=mass_m, residual=residual)


def mv_mass_profile(state: KineticState, flux: FluxModel, M: float) -> np.ndarray:
    """Vectorized mass of the minimal representation for every column."""
    g = state.grid
    m = cell_sums(state)
    pi = equilibrium_profile(g, m)
    diff = state.f - pi
    b0 = ordered_sum(diff, axis=1) * g.dv
    b1 = ordered_sum(diff * flux.a[None, :], axis=1) * g.dv
    gram = _gram_matrix(flux, M)
    alpha = np.linalg.solve(gram, np.vstack([b0, b1]))
    a_tv, a_end = _a_tv_and_end(flux, M)
    fmin_at_M = alpha[0] + alpha[1] * a_end
    return np.abs(alpha[1]) * a_tv + np.abs(fmin_at_M)
