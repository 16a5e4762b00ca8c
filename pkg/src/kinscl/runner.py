"""Run orchestration: hooks, snapshot capture, and file emission."""
from __future__ import annotations

import os

import numpy as np

from .config import (RunConfig, build_flux, build_grid, build_initial,
                     build_scheme, resolve_output_dir, riemann_problem)
from .kinetic import KineticState
from .oracles import riemann_exact
from .ot import entropy_budgets, flux_error_field, reconstruct_m
from .output import (config_hash, emit_diagnostics, emit_kinetic_snapshot,
                     emit_moments, write_moments_rows)
from .schemes import run


def _snapshot_steps(cfg: RunConfig, dt_step: float, n_steps: int):
    """Snap requested snapshot times to completed steps (nearest, deduped)."""
    steps = []
    for t in cfg.snapshots:
        n = min(max(int(round(t / dt_step)), 0), n_steps)
        if n not in steps:
            steps.append(n)
    return sorted(steps)


def execute_run(cfg: RunConfig) -> dict:
    """Run the configured scheme and write the requested output files.

    Returns a mapping of output kind to written path(s).
    """
    grid = build_grid(cfg)
    flux = build_flux(cfg, grid)
    initial = build_initial(cfg, grid, flux)
    scheme = build_scheme(cfg)
    chash = config_hash(cfg.raw_text)

    dt_step = scheme.step_dt
    n_steps = int(round(scheme.t_final / dt_step))
    snap_steps = _snapshot_steps(cfg, dt_step, n_steps)
    snapshots: dict[int, KineticState] = {}
    if 0 in snap_steps:
        snapshots[0] = initial.copy()

    want_diag = "diagnostics" in cfg.outputs
    m_records: list = []

    def hook(n, pre_state, post_state, report):
        if report.collapsed_cells and want_diag:
            mf = reconstruct_m(pre_state, post_state)
            m_records.append({
                "t": post_state.t,
                "min_edge": mf.min_edge,
                "top_edge_abs_max": mf.top_edge_max_abs,
                "total_variation": mf.total_variation,
            })
        if n in snap_steps:
            snapshots[n] = post_state.copy()

    final, ledger = run(scheme, flux, initial, hooks=(hook,))
    ledger.m_records.extend(m_records)

    ordered = [snapshots[n] for n in snap_steps if n in snapshots]
    if want_diag:
        for state in ordered:
            fe = flux_error_field(state, flux)
            ledger.flux_error_records.append({
                "t": state.t,
                "max_entropy_rel": fe.max_abs_entropy,
                "max_flux_rel": fe.max_abs_flux,
                "skipped_cells": fe.skipped,
            })

    out_dir = resolve_output_dir(cfg)
    os.makedirs(out_dir, exist_ok=True)
    written: dict = {}
    if "moments" in cfg.outputs:
        path = os.path.join(out_dir, "moments.csv")
        emit_moments(path, ordered, chash)
        written["moments"] = path
    if "kinetic" in cfg.outputs:
        paths = []
        for idx, state in enumerate(ordered):
            path = os.path.join(out_dir, f"kinetic_{idx:03d}.csv")
            emit_kinetic_snapshot(path, state, sparse=cfg.sparse_kinetic, chash=chash)
            paths.append(path)
        written["kinetic"] = paths
    if "diagnostics" in cfg.outputs:
        path = os.path.join(out_dir, "diagnostics.json")
        emit_diagnostics(path, ledger, entropy_budgets(ledger), chash)
        written["diagnostics"] = path
    return written


def execute_check(cfg: RunConfig) -> None:
    """Validate the configuration by building every object (no stepping)."""
    grid = build_grid(cfg)
    flux = build_flux(cfg, grid)
    build_initial(cfg, grid, flux)
    build_scheme(cfg)


def execute_riemann_exact(cfg: RunConfig) -> dict:
    """Evaluate the exact Riemann solution at the snapshot times."""
    grid = build_grid(cfg)
    flux = build_flux(cfg, grid)
    problem = riemann_problem(cfg, flux)
    chash = config_hash(cfg.raw_text)
    x = grid.x_centers
    tables = []
    for t in sorted(set(cfg.snapshots)):
        if t > 0:
            u = riemann_exact(problem, x, t)
        else:
            u = np.where(x < problem.x0, problem.uL, problem.uR)
        tables.append((t, x, u, 0.5 * u * u))
    out_dir = resolve_output_dir(cfg)
    os.makedirs(out_dir, exist_ok=True)
    path = os.path.join(out_dir, "moments_exact.csv")
    write_moments_rows(path, tables, chash)
    return {"moments_exact": path}
