#!/usr/bin/env python3
"""Grid-refinement study of the full transport-collapse scheme.

Runs the Burgers shock and rarefaction problems at a sequence of
resolutions and prints the L1(x) error against the exact solution.
"""
import argparse

import numpy as np

from kinscl import (GridSpec, KineticState, RiemannProblem, SchemeConfig,
                    burgers_flux, equilibrium_profile, riemann_exact, run,
                    u_profile)


def solve(uL, uR, n_x, h, t_final, n_v=120):
    grid = GridSpec(-2.0, 2.0, n_x, -1.2, 1.2, n_v, boundary="periodic")
    flux = burgers_flux(grid)
    u0 = np.where(grid.x_centers < 0.0, uL, uR)
    state = KineticState(grid, 0.0, equilibrium_profile(grid, u0 / grid.dv))
    final, ledger = run(SchemeConfig("classic", h=h, t_final=t_final), flux, state)
    exact = riemann_exact(RiemannProblem(uL, uR, 0.0, flux), grid.x_centers, t_final)
    window = np.abs(grid.x_centers) <= 1.0
    err = float(np.sum(np.abs(u_profile(final) - exact)[window])) * grid.dx
    return err, ledger


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--t-final", type=float, default=0.5)
    parser.add_argument("--levels", type=int, default=3)
    args = parser.parse_args()

    for uL, uR, name in ((1.0, -1.0, "shock"), (-1.0, 1.0, "rarefaction")):
        print(f"\n{name}: uL={uL}, uR={uR}, t={args.t_final}")
        print(f"{'n_x':>6} {'h':>9} {'L1 error':>12} {'rate':>6}")
        prev = None
        for level in range(args.levels):
            n_x = 500 * 2 ** level
            h = 0.02 / 2 ** level
            err, _ = solve(uL, uR, n_x, h, args.t_final)
            rate = f"{np.log2(prev / err):.2f}" if prev else "  -"
            print(f"{n_x:>6} {h:>9.4f} {err:>12.3e} {rate:>6}")
            prev = err


if __name__ == "__main__":
    main()
