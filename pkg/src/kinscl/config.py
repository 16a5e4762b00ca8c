"""Run configuration: parsing, validation, and object construction.

Config files are ``key = value`` lines with ``#`` comments.  Unknown keys,
duplicates, malformed values and out-of-range numbers are hard errors that
name the offending key and line.  Referenced paths must exist at parse time.
"""
from __future__ import annotations

import os
from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigError, InvariantViolation
from .flux import FluxModel, burgers_flux, load_flux_table
from .grid import GridSpec
from .kinetic import KineticState, equilibrium_profile
from .oracles import RiemannProblem, stripe_initial_state
from .schemes import SCHEMES, SchemeConfig

OUTPUT_KINDS = ("moments", "kinetic", "diagnostics")

OUTPUT_DIR_ENV = "KINSCL_OUTPUT_DIR"


@dataclass
class RunConfig:
    scheme: str
    flux_spec: str
    initial_spec: str
    x_min: float = -2.0
    x_max: float = 2.0
    n_x: int = 400
    v_min: float = -1.5
    v_max: float = 1.5
    n_v: int = 150
    boundary: str = "periodic"
    epsilon: float = 0.0
    h: float = 0.02
    dt: float | None = None
    t_final: float = 0.5
    clamp_tol: float = 1e-12
    snapshots: list = field(default_factory=list)   # defaults to [t_final]
    outputs: list = field(default_factory=lambda: ["moments", "diagnostics"])
    sparse_kinetic: bool = False
    output_dir: str = "out"
    raw_text: str = ""

    def __post_init__(self):
        if not self.snapshots:
            self.snapshots = [self.t_final]


def _parse_float(key, raw, ln):
    try:
        return float(raw)
    except ValueError as exc:
        raise ConfigError(f"line {ln}: key '{key}': not a number: {raw!r}") from exc


def _parse_int(key, raw, ln):
    try:
        return int(raw)
    except ValueError as exc:
        raise ConfigError(f"line {ln}: key '{key}': not an integer: {raw!r}") from exc


def _parse_bool(key, raw, ln):
    low = raw.strip().lower()
    if low in ("true", "yes", "on", "1"):
        return True
    if low in ("false", "no", "off", "0"):
        return False
    raise ConfigError(f"line {ln}: key '{key}': not a boolean: {raw!r}")


_FLOAT_KEYS = ("x_min", "x_max", "v_min", "v_max", "epsilon", "h", "dt",
               "t_final", "clamp_tol")
_INT_KEYS = ("n_x", "n_v")
_STR_KEYS = ("scheme", "flux", "initial", "boundary", "output_dir")
_LIST_KEYS = ("snapshots", "outputs")
_BOOL_KEYS = ("sparse_kinetic",)
_ALL_KEYS = _FLOAT_KEYS + _INT_KEYS + _STR_KEYS + _LIST_KEYS + _BOOL_KEYS
_REQUIRED = ("scheme", "flux", "initial")


def parse_config(text: str) -> RunConfig:
    """Parse and fully validate a config file body."""
    seen: dict = {}
    lines_of: dict = {}
    for ln, line in enumerate(text.splitlines(), start=1):
        body = line.split("#", 1)[0].strip()
        if not body:
            continue
        if "=" not in body:
            raise ConfigError(f"line {ln}: expected 'key = value'")
        key, raw = (part.strip() for part in body.split("=", 1))
        if key not in _ALL_KEYS:
            raise ConfigError(f"line {ln}: unknown key '{key}'")
        if key in seen:
            raise ConfigError(f"line {ln}: duplicate key '{key}' "
                              f"(first set on line {lines_of[key]})")
        seen[key] = raw
        lines_of[key] = ln

    for key in _REQUIRED:
        if key not in seen:
            raise ConfigError(f"missing required key '{key}'")

    kwargs: dict = {
        "scheme": seen["scheme"],
        "flux_spec": seen["flux"],
        "initial_spec": seen["initial"],
        "raw_text": text,
    }
    for key in _FLOAT_KEYS:
        if key in seen:
            kwargs[key] = _parse_float(key, seen[key], lines_of[key])
    for key in _INT_KEYS:
        if key in seen:
            kwargs[key] = _parse_int(key, seen[key], lines_of[key])
    for key in _BOOL_KEYS:
        if key in seen:
            kwargs[key] = _parse_bool(key, seen[key], lines_of[key])
    if "boundary" in seen:
        kwargs["boundary"] = seen["boundary"]
    if "output_dir" in seen:
        kwargs["output_dir"] = seen["output_dir"]
    if "snapshots" in seen:
        kwargs["snapshots"] = [
            _parse_float("snapshots", part, lines_of["snapshots"])
            for part in seen["snapshots"].split(",") if part.strip()
        ]
    if "outputs" in seen:
        kwargs["outputs"] = [p.strip() for p in seen["outputs"].split(",") if p.strip()]

    cfg = RunConfig(**kwargs)
    _validate(cfg, lines_of)
    return cfg


def _validate(cfg: RunConfig, lines_of: dict) -> None:
    def _line(key):
        return f"line {lines_of[key]}: " if key in lines_of else ""

    if cfg.scheme not in SCHEMES:
        raise ConfigError(f"{_line('scheme')}key 'scheme': must be one of {SCHEMES}")
    if cfg.boundary not in ("periodic", "outflow"):
        raise ConfigError(f"{_line('boundary')}key 'boundary': must be periodic or outflow")
    if cfg.n_x < 1:
        raise ConfigError(f"{_line('n_x')}key 'n_x': must be >= 1")
    if cfg.n_v < 2:
        raise ConfigError(f"{_line('n_v')}key 'n_v': must be >= 2")
    if not cfg.x_min < cfg.x_max:
        raise ConfigError("key 'x_min'/'x_max': need x_min < x_max")
    if not cfg.v_min < cfg.v_max:
        raise ConfigError("key 'v_min'/'v_max': need v_min < v_max")
    if cfg.epsilon < 0:
        raise ConfigError(f"{_line('epsilon')}key 'epsilon': must be >= 0")
    if not cfg.h > 0:
        raise ConfigError(f"{_line('h')}key 'h': must be > 0")
    if cfg.t_final < 0:
        raise ConfigError(f"{_line('t_final')}key 't_final': must be >= 0")
    if not cfg.clamp_tol > 0:
        raise ConfigError(f"{_line('clamp_tol')}key 'clamp_tol': must be > 0")
    if cfg.scheme == "bgk":
        if cfg.dt is None:
            raise ConfigError("scheme 'bgk' requires key 'dt'")
        if not cfg.dt > 0:
            raise ConfigError(f"{_line('dt')}key 'dt': must be > 0")
    elif cfg.dt is not None:
        raise ConfigError(f"{_line('dt')}key 'dt': only valid for scheme = bgk")
    for t in cfg.snapshots:
        if not 0.0 <= t <= cfg.t_final:
            raise ConfigError(f"{_line('snapshots')}key 'snapshots': "
                              f"time {t} outside [0, t_final]")
    for kind in cfg.outputs:
        if kind not in OUTPUT_KINDS:
            raise ConfigError(f"{_line('outputs')}key 'outputs': unknown kind {kind!r}")

    _parse_flux_spec(cfg.flux_spec)       # validates form and path existence
    _parse_initial_spec(cfg.initial_spec)


def _parse_flux_spec(spec: str):
    if spec == "burgers":
        return ("burgers",)
    if spec.startswith("table:"):
        path = spec[len("table:"):]
        if not os.path.exists(path):
            raise ConfigError(f"key 'flux': table file not found: {path}")
        return ("table", path)
    raise ConfigError(f"key 'flux': expected 'burgers' or 'table:<path>', got {spec!r}")


def _parse_initial_spec(spec: str):
    if spec.startswith("riemann:"):
        parts = spec[len("riemann:"):].split(",")
        if len(parts) != 3:
            raise ConfigError("key 'initial': riemann needs 'riemann:uL,uR,x0'")
        try:
            return ("riemann",) + tuple(float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"key 'initial': {exc}") from exc
    if spec.startswith("stripe:"):
        parts = spec[len("stripe:"):].split(",")
        if len(parts) != 2:
            raise ConfigError("key 'initial': stripe needs 'stripe:h,delta'")
        try:
            h, delta = (float(p) for p in parts)
        except ValueError as exc:
            raise ConfigError(f"key 'initial': {exc}") from exc
        if not h > 0:
            raise ConfigError("key 'initial': stripe h must be > 0")
        if not 0 < delta < 1:
            raise ConfigError("key 'initial': stripe delta must lie in (0, 1)")
        return ("stripe", h, delta)
    if spec.startswith("file:"):
        path = spec[len("file:"):]
        if not os.path.exists(path):
            raise ConfigError(f"key 'initial': snapshot file not found: {path}")
        return ("file", path)
    raise ConfigError("key 'initial': expected 'riemann:uL,uR,x0', "
                      f"'stripe:h,delta' or 'file:<path>', got {spec!r}")


def load_config(path) -> RunConfig:
    with open(path, "r", encoding="utf-8") as fh:
        return parse_config(fh.read())


# ---------------------------------------------------------------------------
# object construction

def build_grid(cfg: RunConfig) -> GridSpec:
    return GridSpec(cfg.x_min, cfg.x_max, cfg.n_x, cfg.v_min, cfg.v_max,
                    cfg.n_v, cfg.boundary)


def build_flux(cfg: RunConfig, grid: GridSpec) -> FluxModel:
    spec = _parse_flux_spec(cfg.flux_spec)
    if spec[0] == "burgers":
        return burgers_flux(grid)
    return load_flux_table(grid, spec[1])


def build_initial(cfg: RunConfig, grid: GridSpec, flux: FluxModel) -> KineticState:
    spec = _parse_initial_spec(cfg.initial_spec)
    if spec[0] == "riemann":
        _, uL, uR, x0 = spec
        u0 = np.where(grid.x_centers < x0, uL, uR)
        try:
            f = equilibrium_profile(grid, u0 / grid.dv)
        except InvariantViolation as exc:
            raise ConfigError(f"key 'initial': {exc}") from exc
        return KineticState(grid, 0.0, f)
    if spec[0] == "stripe":
        return stripe_initial_state(grid, spec[1], spec[2])
    from .output import load_kinetic_snapshot
    return load_kinetic_snapshot(spec[1], grid)


def build_scheme(cfg: RunConfig) -> SchemeConfig:
    return SchemeConfig(scheme=cfg.scheme, h=cfg.h, t_final=cfg.t_final,
                        epsilon=cfg.epsilon, dt=cfg.dt, clamp_tol=cfg.clamp_tol)


def riemann_problem(cfg: RunConfig, flux: FluxModel) -> RiemannProblem:
    spec = _parse_initial_spec(cfg.initial_spec)
    if spec[0] != "riemann":
        raise ConfigError("exact Riemann evaluation needs initial = riemann:uL,uR,x0")
    return RiemannProblem(uL=spec[1], uR=spec[2], x0=spec[3], flux=flux)


def resolve_output_dir(cfg: RunConfig) -> str:
    return os.environ.get(OUTPUT_DIR_ENV, cfg.output_dir)
