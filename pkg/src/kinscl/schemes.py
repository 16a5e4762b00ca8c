"""Time steppers: transport-collapse (full and threshold-gated) and BGK.

All three schemes alternate exact-velocity transport with a local
interaction whose strength is gated by the deviation functional D:

* ``classic``       -- project every out-of-equilibrium column each step
                       (implemented as the threshold scheme at epsilon = 0,
                       which is the same map: columns with D = 0 already
                       equal their projection);
* ``thresholded``   -- project only columns with D > epsilon;
* ``bgk``           -- relax columns with D > epsilon toward equilibrium by
                       the exact factor of the frozen-coefficient ODE,
                       clamped so D lands on epsilon instead of overshooting.

Steppers are pure: they return a new state plus a :class:`StepReport`.
Diagnostics beyond the report are exposed through hooks on :func:`run`.
"""
from __future__ import annotations

import warnings
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InvariantViolation
from .flux import FluxModel
from .kinetic import (KineticState, cell_sums, default_deviation_tol,
                      equilibrium_profile, kinetic_entropy,
                      sign_compatibility_violation, total_mass,
                      _clamp_numerator, _deviation_parts)
from .transport import advect

SCHEMES = ("classic", "thresholded", "bgk")

# abort threshold for periodic-mode mass drift, per 1000 steps
_MASS_DRIFT_PER_1000 = 1e-10


@dataclass(frozen=True)
class SchemeConfig:
    scheme: str
    h: float
    t_final: float
    epsilon: float = 0.0
    dt: float | None = None
    clamp_tol: float = 1e-12

    def __post_init__(self):
        if self.scheme not in SCHEMES:
            raise ConfigError(f"scheme must be one of {SCHEMES}, got {self.scheme!r}")
        if not self.h > 0:
            raise ConfigError("h must be > 0")
        if self.t_final < 0:
            raise ConfigError("t_final must be >= 0")
        if not self.epsilon >= 0:
            raise ConfigError("epsilon must be >= 0")
        if not self.clamp_tol > 0:
            raise ConfigError("clamp_tol must be > 0")
        if self.scheme == "bgk":
            if self.dt is None:
                raise ConfigError("scheme 'bgk' requires dt")
            if not self.dt > 0:
                raise ConfigError("dt must be > 0")
            if self.dt > self.h:
                warnings.warn("bgk substep dt exceeds the relaxation time h; "
                              "splitting accuracy degrades", stacklevel=2)
        elif self.dt is not None and self.dt != self.h:
            raise ConfigError("dt is only configurable for scheme 'bgk' "
                              "(discrete schemes step by h)")

    @property
    def step_dt(self) -> float:
        return self.dt if self.scheme == "bgk" else self.h


@dataclass
class StepReport:
    """Per-step record of the interaction substep."""

    t: float
    collapsed_cells: int
    collapsed_measure: float
    entropy_drop: float
    w1_drop: float
    collapsed_entropy_mass: float = 0.0

    def as_dict(self) -> dict:
        return {
            "t": self.t,
            "collapsed_cells": self.collapsed_cells,
            "collapsed_measure": self.collapsed_measure,
            "entropy_drop": self.entropy_drop,
            "w1_drop": self.w1_drop,
            "collapsed_entropy_mass": self.collapsed_entropy_mass,
        }


@dataclass
class DiagnosticsLedger:
    """Accumulated per-step records plus attachments filled by hooks."""

    initial_mass: float = 0.0
    initial_entropy: float = 0.0
    times: list = field(default_factory=list)
    reports: list = field(default_factory=list)
    entropy_after_transport: list = field(default_factory=list)
    entropy_after_relax: list = field(default_factory=list)
    mass: list = field(default_factory=list)
    m_records: list = field(default_factory=list)
    flux_error_records: list = field(default_factory=list)

    @classmethod
    def start(cls, state: KineticState) -> "DiagnosticsLedger":
        return cls(initial_mass=total_mass(state), initial_entropy=kinetic_entropy(state))

    def append_step(self, report: StepReport, entropy_transport: float,
                    entropy_relax: float, mass: float) -> None:
        self.times.append(report.t)
        self.reports.append(report)
        self.entropy_after_transport.append(entropy_transport)
        self.entropy_after_relax.append(entropy_relax)
        self.mass.append(mass)

    @property
    def max_mass_drift(self) -> float:
        if not self.mass:
            return 0.0
        return float(np.max(np.abs(np.asarray(self.mass) - self.initial_mass)))

    def as_dict(self) -> dict:
        return {
            "initial_mass": self.initial_mass,
            "initial_entropy": self.initial_entropy,
            "per_step": [r.as_dict() for r in self.reports],
            "entropy_series": {
                "t": list(self.times),
                "after_transport": list(self.entropy_after_transport),
                "after_collapse": list(self.entropy_after_relax),
            },
            "mass_drift": {
                "initial": self.initial_mass,
                "final": self.mass[-1] if self.mass else self.initial_mass,
                "max_abs_drift": self.max_mass_drift,
            },
            "flux_error": list(self.flux_error_records),
            "m_measure": list(self.m_records),
        }


def _w1_to_targets(f_cols: np.ndarray, target_cols: np.ndarray, dv: float) -> np.ndarray:
    """W1 between columns and targets of equal mass via the L1 gap of their
    cumulatives (trapezoid over edges; the cumulatives vanish at both ends)."""
    gap = np.abs(np.cumsum(f_cols - target_cols, axis=1) * dv)
    return dv * (np.sum(gap[:, :-1], axis=1) + 0.5 * gap[:, -1])


def _gate(state: KineticState, num_tol: float | None):
    """Equilibria, deviation parts and the deviation itself, per column."""
    g = state.grid
    tol = default_deviation_tol(g.n_v) if num_tol is None else num_tol
    pi = equilibrium_profile(g, cell_sums(state))
    num, den = _deviation_parts(g, state.f, pi)
    num = _clamp_numerator(num, tol)
    dev = np.zeros_like(num)
    np.divide(num, den, out=dev, where=den != 0.0)
    return pi, num, den, dev


def collapse_substep(state: KineticState, epsilon: float,
                     num_tol: float | None = None):
    """Project every column with D > epsilon to its equilibrium."""
    g = state.grid
    pi, num, den, dev = _gate(state, num_tol)
    mask = dev > epsilon
    f_new = state.f.copy()
    count = int(np.count_nonzero(mask))
    if count:
        w1_cols = _w1_to_targets(state.f[mask], pi[mask], g.dv)
        f_new[mask] = pi[mask]
        report = StepReport(
            t=state.t,
            collapsed_cells=count,
            collapsed_measure=count * g.dx,
            entropy_drop=float(np.sum(num[mask])) * g.dx,
            w1_drop=float(np.sum(w1_cols)) * g.dx,
            collapsed_entropy_mass=float(np.sum(den[mask])) * g.dx,
        )
    else:
        report = StepReport(state.t, 0, 0.0, 0.0, 0.0, 0.0)
    return KineticState(g, state.t, f_new), report


def relax_substep(state: KineticState, dt: float, h: float, epsilon: float,
                  num_tol: float | None = None):
    """Exact-exponential relaxation toward equilibrium where D > epsilon.

    The zero moment is invariant under relaxation, so the equilibrium is
    frozen during the substep and f <- Pi + sigma (f - Pi) with
    sigma = max(exp(-dt/h), epsilon / D) solves the gated ODE exactly; the
    second argument stops the decay the moment D reaches epsilon.
    """
    g = state.grid
    pi, num, den, dev = _gate(state, num_tol)
    mask = dev > epsilon
    f_new = state.f.copy()
    count = int(np.count_nonzero(mask))
    if count:
        sigma = np.maximum(np.exp(-dt / h), epsilon / dev[mask])
        resid = state.f[mask] - pi[mask]
        f_new[mask] = pi[mask] + sigma[:, None] * resid
        w1_cols = _w1_to_targets(state.f[mask], pi[mask], g.dv)
        shed = 1.0 - sigma
        report = StepReport(
            t=state.t,
            collapsed_cells=count,
            collapsed_measure=count * g.dx,
            entropy_drop=float(np.sum(shed * num[mask])) * g.dx,
            w1_drop=float(np.sum(shed * w1_cols)) * g.dx,
            collapsed_entropy_mass=float(np.sum(den[mask])) * g.dx,
        )
    else:
        report = StepReport(state.t, 0, 0.0, 0.0, 0.0, 0.0)
    return KineticState(g, state.t, f_new), report


def step_thresholded(state: KineticState, flux: FluxModel, h: float, epsilon: float,
                     num_tol: float | None = None):
    """One step of the threshold scheme: transport by h, then gated collapse."""
    transported = advect(state, flux, h)
    return collapse_substep(transported, epsilon, num_tol)


def step_classic(state: KineticState, flux: FluxModel, h: float,
                 num_tol: float | None = None):
    """One step of the full transport-collapse scheme (epsilon = 0)."""
    return step_thresholded(state, flux, h, 0.0, num_tol)


def step_bgk(state: KineticState, flux: FluxModel, dt: float, h: float, epsilon: float,
             num_tol: float | None = None):
    """One BGK substep: transport by dt, then gated exponential relaxation."""
    transported = advect(state, flux, dt)
    return relax_substep(transported, dt, h, epsilon, num_tol)


def _support_bound(state: KineticState) -> float:
    """Velocity extent that the run must never outgrow."""
    g = state.grid
    m_u = float(np.max(np.abs(cell_sums(state)))) * g.dv
    nonzero = np.any(state.f != 0.0, axis=0)
    if nonzero.any():
        j = np.where(nonzero)[0]
        extent = max(abs(g.v_edges[j[0]]), abs(g.v_edges[j[-1] + 1]))
    else:
        extent = 0.0
    return max(m_u, extent)


def _check_invariants(state: KineticState, step: int, clamp_tol: float,
                      support_M: float, outside: np.ndarray,
                      mass: float, initial_mass: float) -> None:
    worst = sign_compatibility_violation(state)
    if worst > clamp_tol:
        raise InvariantViolation(
            f"step {step}: sign-compatibility violated by {worst:.3e} "
            f"(> clamp_tol {clamp_tol:.1e})")
    if outside.any() and np.any(state.f[:, outside] != 0.0):
        raise InvariantViolation(
            f"step {step}: kinetic support grew beyond |v| <= {support_M}")
    if state.grid.boundary == "periodic":
        allowed = _MASS_DRIFT_PER_1000 * max(abs(initial_mass), 1.0) * (1.0 + step / 1000.0)
        if abs(mass - initial_mass) > allowed:
            raise InvariantViolation(
                f"step {step}: mass drift {mass - initial_mass:.3e} exceeds {allowed:.3e}")


def run(config: SchemeConfig, flux: FluxModel, initial: KineticState, hooks=()):
    """Iterate the selected stepper to t_final.

    ``hooks`` are callables ``hook(step_index, pre_interaction_state,
    post_state, report)`` invoked after every step; they must be pure
    readers.  Returns the final state and a :class:`DiagnosticsLedger`.
    Aborts with :class:`InvariantViolation` on sign-structure, support or
    periodic-mass-drift failures.
    """
    g = initial.grid
    dt_step = config.step_dt
    n_steps = int(round(config.t_final / dt_step))
    if abs(n_steps * dt_step - config.t_final) > 1e-9 * max(1.0, config.t_final):
        warnings.warn(f"t_final={config.t_final} is not a multiple of the step "
                      f"{dt_step}; running {n_steps} steps", stacklevel=2)
    ledger = DiagnosticsLedger.start(initial)
    state = initial.copy()
    if n_steps == 0:
        return state, ledger

    support_M = _support_bound(initial)
    outside = np.abs(g.v_centers) > support_M + 0.5 * g.dv
    num_tol = default_deviation_tol(g.n_v)

    for n in range(1, n_steps + 1):
        transported = advect(state, flux, dt_step)
        transported.t = n * dt_step
        if config.scheme == "bgk":
            state, report = relax_substep(transported, dt_step, config.h,
                                          config.epsilon, num_tol)
        else:
            state, report = collapse_substep(transported, config.epsilon, num_tol)
        e_trans = kinetic_entropy(transported)
        e_relax = kinetic_entropy(state)
        mass = total_mass(state)
        _check_invariants(state, n, config.clamp_tol, support_M, outside,
                          mass, ledger.initial_mass)
        ledger.append_step(report, e_trans, e_relax, mass)
        for hook in hooks:
            hook(n, transported, state, report)
    return state, ledger
