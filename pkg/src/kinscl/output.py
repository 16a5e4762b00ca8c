"""Serialization of moments, kinetic snapshots, and diagnostics.

Floats are written with 17 significant digits so every file round-trips
bit-exactly; every file names the config hash in a header comment.
"""
from __future__ import annotations

import hashlib
import json
import math

import numpy as np

from .errors import ConfigError
from .grid import GridSpec
from .kinetic import KineticState, moments
from .ot import EntropyBudgets
from .schemes import DiagnosticsLedger


def fmt17(x: float) -> str:
    return format(float(x), ".17g")


def config_hash(text: str) -> str:
    return hashlib.sha256(text.encode("utf-8")).hexdigest()[:16]


def write_moments_rows(path, tables, chash: str = "") -> None:
    """Write ``(t, x_array, u_array, entropy_array)`` tables in (t, x) order."""
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# kinscl moments\n")
        fh.write(f"# config_hash={chash}\n")
        fh.write("t,x,u,entropy_moment\n")
        for t, x, u, ent in tables:
            ts = fmt17(t)
            for xi, ui, ei in zip(x, u, ent):
                fh.write(f"{ts},{fmt17(xi)},{fmt17(ui)},{fmt17(ei)}\n")


def emit_moments(path, states, chash: str = "") -> None:
    """CSV of u and the entropy moment for each snapshot state."""
    tables = []
    for state in states:
        mom = moments(state)
        tables.append((state.t, state.grid.x_centers, mom.u, mom.entropy_moment))
    tables.sort(key=lambda table: table[0])
    write_moments_rows(path, tables, chash)


def _grid_header(grid: GridSpec) -> str:
    return ("# grid: "
            f"x_min={fmt17(grid.x_min)} x_max={fmt17(grid.x_max)} n_x={grid.n_x} "
            f"v_min={fmt17(grid.v_min)} v_max={fmt17(grid.v_max)} n_v={grid.n_v} "
            f"boundary={grid.boundary}")


def emit_kinetic_snapshot(path, state: KineticState, sparse: bool = False,
                          chash: str = "") -> None:
    """Long-format CSV (t, x, v, f); zero cells may be omitted (sparse)."""
    g = state.grid
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write("# kinscl kinetic snapshot\n")
        fh.write(f"# config_hash={chash}\n")
        fh.write(f"# sparse={'true' if sparse else 'false'}\n")
        fh.write(_grid_header(g) + "\n")
        fh.write("t,x,v,f\n")
        ts = fmt17(state.t)
        xs = [fmt17(x) for x in g.x_centers]
        vs = [fmt17(v) for v in g.v_centers]
        f = state.f
        for i in range(g.n_x):
            row = f[i]
            for j in range(g.n_v):
                if sparse and row[j] == 0.0:
                    continue
                fh.write(f"{ts},{xs[i]},{vs[j]},{fmt17(row[j])}\n")


def load_kinetic_snapshot(path, grid: GridSpec) -> KineticState:
    """Reload a snapshot emitted by :func:`emit_kinetic_snapshot`."""
    f = np.zeros((grid.n_x, grid.n_v))
    t_val = None
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.strip()
            if line.startswith("# grid:"):
                _check_grid_header(path, line, grid)
                continue
            if not line or line.startswith("#") or line.startswith("t,"):
                continue
            parts = line.split(",")
            if len(parts) != 4:
                raise ConfigError(f"{path}:{ln}: expected 't,x,v,f' row")
            t, x, v, val = (float(p) for p in parts)
            if t_val is None:
                t_val = t
            elif t != t_val:
                raise ConfigError(f"{path}:{ln}: snapshot mixes several times")
            i = int(round((x - grid.x_min) / grid.dx - 0.5))
            j = int(round((v - grid.v_edges[0]) / grid.dv - 0.5))
            if not (0 <= i < grid.n_x) or not math.isclose(
                    grid.x_centers[i], x, rel_tol=1e-12, abs_tol=1e-12 * grid.dx):
                raise ConfigError(f"{path}:{ln}: x={x} is not a grid cell center")
            if not (0 <= j < grid.n_v) or not math.isclose(
                    grid.v_centers[j], v, rel_tol=1e-12, abs_tol=1e-12 * grid.dv):
                raise ConfigError(f"{path}:{ln}: v={v} is not a grid cell center")
            f[i, j] = val
    return KineticState(grid, t_val if t_val is not None else 0.0, f)


def _check_grid_header(path, line: str, grid: GridSpec) -> None:
    fields = dict(part.split("=", 1) for part in line[len("# grid: "):].split())
    ok = (int(fields["n_x"]) == grid.n_x and int(fields["n_v"]) == grid.n_v
          and fields["boundary"] == grid.boundary
          and math.isclose(float(fields["x_min"]), grid.x_min, rel_tol=1e-12, abs_tol=1e-300)
          and math.isclose(float(fields["x_max"]), grid.x_max, rel_tol=1e-12, abs_tol=1e-300)
          and math.isclose(float(fields["v_min"]), grid.v_min, rel_tol=1e-12, abs_tol=1e-300)
          and math.isclose(float(fields["v_max"]), grid.v_max, rel_tol=1e-12, abs_tol=1e-300))
    if not ok:
        raise ConfigError(f"{path}: snapshot grid {line!r} does not match the "
                          "configured grid")


def emit_diagnostics(path, ledger: DiagnosticsLedger, budgets: EntropyBudgets,
                     chash: str = "") -> None:
    """Single JSON object with per-step reports, budgets and attachments."""
    payload = {
        "config_hash": chash,
        "budgets": {
            "w1_total": budgets.w1_total,
            "equilibrium_entropy_total": budgets.equilibrium_entropy_total,
            "collapsed_measure_total": budgets.collapsed_measure_total,
        },
    }
    payload.update(ledger.as_dict())
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        json.dump(payload, fh, indent=2)
        fh.write("\n")
