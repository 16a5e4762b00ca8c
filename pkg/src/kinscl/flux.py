"""Flux models sampled on the velocity grid.

A flux is carried as the pair (A at cell edges, A' at cell centers).  The
two samplings must be midpoint-consistent: A(e_{j+1}) - A(e_j) ~ A'(v_j) dv.
Tables derived by differencing edge values satisfy this identity exactly.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import ConfigError
from .grid import GridSpec


@dataclass(frozen=True, eq=False)
class FluxModel:
    name: str
    a: np.ndarray        # A' at v-cell centers, shape (n_v,)
    A: np.ndarray        # A at v-cell edges, shape (n_v + 1,)
    v_edges: np.ndarray  # shape (n_v + 1,)
    convex: bool = False

    def __post_init__(self):
        a = np.asarray(self.a, dtype=float)
        A = np.asarray(self.A, dtype=float)
        e = np.asarray(self.v_edges, dtype=float)
        object.__setattr__(self, "a", a)
        object.__setattr__(self, "A", A)
        object.__setattr__(self, "v_edges", e)
        if A.shape != (a.shape[0] + 1,) or e.shape != A.shape:
            raise ConfigError("flux arrays have inconsistent shapes")
        _check_midpoint_consistency(self.name, a, A, e)

    @property
    def n_v(self) -> int:
        return self.a.shape[0]

    @property
    def v_centers(self) -> np.ndarray:
        return 0.5 * (self.v_edges[:-1] + self.v_edges[1:])

    def A_at(self, u):
        """A evaluated at state values by interpolation of the edge table."""
        u = np.asarray(u, dtype=float)
        if np.any(u < self.v_edges[0]) or np.any(u > self.v_edges[-1]):
            raise ValueError(
                f"state value outside sampled flux range "
                f"[{self.v_edges[0]}, {self.v_edges[-1]}]"
            )
        return np.interp(u, self.v_edges, self.A)

    def a_at(self, v):
        """A' evaluated by interpolation of the center table (clamped ends)."""
        return np.interp(np.asarray(v, dtype=float), self.v_centers, self.a)


def _check_midpoint_consistency(name, a, A, edges):
    dv = np.diff(edges)
    dA = np.diff(A)
    if a.shape[0] >= 3:
        curv = np.max(np.abs(np.diff(a, 2)))
    else:
        curv = 0.0
    tol = curv * float(np.max(dv)) / 3.0 + 1e-12 * (1.0 + float(np.max(np.abs(A))))
    err = np.max(np.abs(dA - a * dv))
    if err > tol:
        raise ConfigError(
            f"flux {name!r}: edge/center samplings are not midpoint-consistent "
            f"(max error {err:.3e}, tolerance {tol:.3e})"
        )


def burgers_flux(grid: GridSpec) -> FluxModel:
    """A(u) = u^2 / 2, A'(v) = v."""
    e = grid.v_edges
    return FluxModel("burgers", grid.v_centers.copy(), 0.5 * e * e, e, convex=True)


def linear_flux(grid: GridSpec, speed: float) -> FluxModel:
    """A(u) = speed * u; degenerate for the non-degeneracy diagnostic."""
    e = grid.v_edges
    a = np.full(grid.n_v, float(speed))
    return FluxModel(f"linear[{speed}]", a, speed * e, e, convex=False)


def cubic_flux(grid: GridSpec) -> FluxModel:
    """A(u) = u^4 / 4, A'(v) = v^3 (convex, with a flat spot at 0)."""
    e = grid.v_edges
    return FluxModel("cubic", grid.v_centers ** 3, 0.25 * e ** 4, e, convex=True)


def flux_from_table(grid: GridSpec, v_samples, A_samples, name="table") -> FluxModel:
    """Build a flux from (v, A) samples; A' is derived by exact differencing."""
    v_samples = np.asarray(v_samples, dtype=float)
    A_samples = np.asarray(A_samples, dtype=float)
    if v_samples.ndim != 1 or v_samples.shape != A_samples.shape or v_samples.size < 2:
        raise ConfigError("flux table needs matching 1-D v and A columns, >= 2 rows")
    if np.any(np.diff(v_samples) <= 0):
        raise ConfigError("flux table v column must be strictly increasing")
    e = grid.v_edges
    if e[0] < v_samples[0] - 1e-12 or e[-1] > v_samples[-1] + 1e-12:
        raise ConfigError(
            f"flux table covers [{v_samples[0]}, {v_samples[-1]}] but the grid "
            f"needs [{e[0]}, {e[-1]}]"
        )
    A = np.interp(e, v_samples, A_samples)
    a = np.diff(A) / grid.dv
    convex = bool(np.all(np.diff(a) >= -1e-12 * (1.0 + np.max(np.abs(a)))))
    return FluxModel(name, a, A, e, convex=convex)


def load_flux_table(grid: GridSpec, path) -> FluxModel:
    """Read a two-column CSV (header ``v,A``) and build a flux from it."""
    rows = []
    with open(path, "r", encoding="utf-8") as fh:
        for ln, line in enumerate(fh, start=1):
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            parts = [p.strip() for p in line.split(",")]
            if parts[:2] == ["v", "A"]:
                continue
            if len(parts) < 2:
                raise ConfigError(f"{path}:{ln}: expected 'v,A' row")
            try:
                rows.append((float(parts[0]), float(parts[1])))
            except ValueError as exc:
                raise ConfigError(f"{path}:{ln}: {exc}") from exc
    if len(rows) < 2:
        raise ConfigError(f"{path}: flux table needs at least 2 rows")
    v, A = np.array(rows).T
    return flux_from_table(grid, v, A, name=f"table:{path}")
