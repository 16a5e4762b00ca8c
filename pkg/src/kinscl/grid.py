"""Uniform tensor grids in space and velocity.

All solver state lives on cell averages of a (x, v) tensor grid.  The
velocity grid is required to have v = 0 on a cell edge so each v-cell has a
definite sign; that makes the signed-indicator structure of kinetic columns
testable cell by cell.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import cached_property

import numpy as np

from .errors import ConfigError

BOUNDARIES = ("periodic", "outflow")

# relative slack when checking that v = 0 lands on an edge
_ALIGN_RTOL = 1e-9


@dataclass(frozen=True)
class GridSpec:
    """Geometry of the (x, v) grid.

    Velocity edges are snapped to exact multiples of ``dv`` around the zero
    edge, so ``v_edges[j_zero] == 0.0`` bitwise; the requested ``v_min`` and
    ``v_max`` are honored to a rounding error.  Construction fails if v = 0
    does not coincide with an edge; use :meth:`with_zero_edge` to bump
    ``n_v`` until it does.
    """

    x_min: float
    x_max: float
    n_x: int
    v_min: float
    v_max: float
    n_v: int
    boundary: str = "periodic"

    def __post_init__(self):
        if self.boundary not in BOUNDARIES:
            raise ConfigError(f"boundary must be one of {BOUNDARIES}, got {self.boundary!r}")
        if not self.x_min < self.x_max:
            raise ConfigError("x_min must be < x_max")
        if not self.v_min < self.v_max:
            raise ConfigError("v_min must be < v_max")
        if self.n_x < 1:
            raise ConfigError("n_x must be >= 1")
        if self.n_v < 2:
            raise ConfigError("n_v must be >= 2")
        if not (self.v_min <= 0.0 <= self.v_max):
            raise ConfigError("velocity range must contain v = 0")
        dv = (self.v_max - self.v_min) / self.n_v
        ratio = -self.v_min / dv
        if abs(ratio - round(ratio)) > _ALIGN_RTOL * self.n_v:
            raise ConfigError(
                f"v = 0 is not a cell edge for v_min={self.v_min}, v_max={self.v_max}, "
                f"n_v={self.n_v}; adjust n_v (see GridSpec.with_zero_edge)"
            )

    @classmethod
    def with_zero_edge(cls, x_min, x_max, n_x, v_min, v_max, n_v, boundary="periodic"):
        """Like the constructor, but increases ``n_v`` until v = 0 is an edge."""
        for n in range(n_v, 8 * n_v + 1):
            dv = (v_max - v_min) / n
            ratio = -v_min / dv
            if abs(ratio - round(ratio)) <= _ALIGN_RTOL * n:
                return cls(x_min, x_max, n_x, v_min, v_max, n, boundary)
        raise ConfigError("could not align v = 0 with a cell edge by refining n_v")

    @cached_property
    def dx(self) -> float:
        return (self.x_max - self.x_min) / self.n_x

    @cached_property
    def dv(self) -> float:
        return (self.v_max - self.v_min) / self.n_v

    @cached_property
    def j_zero(self) -> int:
        """Index of the velocity edge sitting at v = 0."""
        return int(round(-self.v_min / self.dv))

    @cached_property
    def x_centers(self) -> np.ndarray:
        return self.x_min + (np.arange(self.n_x) + 0.5) * self.dx

    @cached_property
    def x_edges(self) -> np.ndarray:
        return self.x_min + np.arange(self.n_x + 1) * self.dx

    @cached_property
    def v_edges(self) -> np.ndarray:
        return (np.arange(self.n_v + 1) - self.j_zero) * self.dv

    @cached_property
    def v_centers(self) -> np.ndarray:
        return (np.arange(self.n_v) - self.j_zero + 0.5) * self.dv
