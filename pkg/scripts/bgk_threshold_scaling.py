#!/usr/bin/env python3
"""Threshold sweep for the gated BGK scheme on a moving shock.

For each deviation threshold, tracks the time-max of the relative flux
errors and of the two-term minimal-representation mass, then fits a linear
law in the threshold.  Both should scale linearly once the relaxation
pins the post-step deviation at the threshold.
"""
import argparse

import numpy as np

from kinscl import (GridSpec, KineticState, burgers_flux, equilibrium_profile,
                    flux_error_field, mv_mass_profile, step_bgk)


def sweep(eps_values, n_x=50, n_v=100, dt=2.5e-4, t_final=0.4, stride=4):
    grid = GridSpec(-2.0, 2.0, n_x, 0.0, 2.0, n_v, boundary="periodic")
    flux = burgers_flux(grid)
    u0 = np.where(grid.x_centers < 0.0, 1.5, 0.5)
    initial = KineticState(grid, 0.0, equilibrium_profile(grid, u0 / grid.dv))
    h = 4 * dt
    rows = []
    for eps in eps_values:
        state = initial.copy()
        e1 = e2 = mv = 0.0
        for n in range(1, int(round(t_final / dt)) + 1):
            state, _ = step_bgk(state, flux, dt, h, eps)
            if n % stride == 0:
                fe = flux_error_field(state, flux)
                e1 = max(e1, fe.max_abs_entropy)
                e2 = max(e2, fe.max_abs_flux)
                mv = max(mv, float(np.max(mv_mass_profile(state, flux, 1.5))))
        rows.append((eps, e1, e2, mv))
    return rows


def fit(xs, ys):
    coef = np.polyfit(xs, ys, 1)
    resid = ys - np.polyval(coef, xs)
    r2 = 1 - np.sum(resid ** 2) / np.sum((ys - np.mean(ys)) ** 2)
    return coef[0], r2


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--eps", type=float, nargs="+",
                        default=[0.05, 0.1, 0.2])
    args = parser.parse_args()

    rows = sweep(args.eps)
    print(f"{'eps':>6} {'max entropy err':>16} {'max flux err':>14} {'mv mass':>10}")
    for eps, e1, e2, mv in rows:
        print(f"{eps:>6.3f} {e1:>16.5f} {e2:>14.5f} {mv:>10.5f}")
    data = np.array(rows)
    for k, label in ((1, "entropy error"), (2, "flux error"), (3, "mv mass")):
        slope, r2 = fit(data[:, 0], data[:, k])
        print(f"{label}: slope = {slope:.3f}, R^2 = {r2:.5f}")


if __name__ == "__main__":
    main()
