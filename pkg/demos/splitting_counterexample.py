"""One step of the linear Euler subsystem turns two positive-pressure states into a negative one.

Run: python3 demos/splitting_counterexample.py
"""

import numpy as np

from hsguq.gpc import build_basis, build_quadrature
from hsguq.methods.splitting import euler_splitting_parameter, euler_subsystem_fluxes
from hsguq.models.euler import pressure
from hsguq.solver import Grid, MomentField, lax_friedrichs_step

GAMMA = 1.4


def step(c, eps):
    left = [0.5, 2.0, 4.0 + eps]
    right = [0.4, 2.0, 5.0 + eps]
    basis, quad = build_basis(0), build_quadrature(1)
    field = MomentField(np.array([right, left, left])[:, None, :], Grid(3, 0.0, 3.0))
    a = euler_splitting_parameter(field, basis, quad, GAMMA, 1.0)
    linear = euler_subsystem_fluxes(a, GAMMA)[0]
    new = lax_friedrichs_step(field, None, basis, quad, 2.0 * c / a, flux=linear)
    return new.U[1, 0], a


if __name__ == "__main__":
    c = 0.95
    print(f"both input states have pressure 0.4 eps; CFL ratio c = {c}")
    print(f"{'eps':>8} {'rho':>8} {'m':>10} {'E':>10} {'pressure':>12}")
    for eps in (0.01, 0.1, 0.5, 1.0, 1.5):
        u, a = step(c, eps)
        print(f"{eps:8.3f} {u[0]:8.4f} {u[1]:10.6f} {u[2]:10.6f} {pressure(u, GAMMA):12.6f}")
    print(f"splitting parameter a = {a}")
    print(f"pressure vanishes at eps = c^2/360 + 11c/9 - 1/18 = {c * c / 360 + 11 * c / 9 - 1 / 18:.6f}")
    print(f"a negative pressure is reachable for every c > 6 sqrt(1345) - 220 = {6 * np.sqrt(1345) - 220:.10f}")
