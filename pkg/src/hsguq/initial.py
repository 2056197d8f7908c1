"""Built-in initial conditions and problem assembly from a run configuration."""

from functools import lru_cache

import numpy as np

from .errors import ConfigError
from .models import M1, ClosureTable, Euler, build_closure_table
from .solver import Grid

PLANE_SOURCE_FLOOR = 1e-4
PLANE_SOURCE_WIDTH = 50.0

SOD_LEFT = (1.0, 0.0, 2.5)
SOD_RIGHT = (0.125, 0.0, 0.25)
# the shock variant swaps the energies
SHOCK_LEFT = (1.0, 0.0, 0.25)
SHOCK_RIGHT = (0.125, 0.0, 2.5)

# per initial condition: model, domain, (sigma_a, sigma_s) for M1
DEFAULTS = {
    "plane_source": {"model": "m1", "x_left": -0.5, "x_right": 0.5},
    "sod_uq": {"model": "euler", "x_left": 0.0, "x_right": 1.0},
    "shock_uq": {"model": "euler", "x_left": 0.0, "x_right": 1.0},
    "custom": {"model": None, "x_left": 0.0, "x_right": 1.0},
}


def plane_source(x, xi):
    """Gaussian pulse whose width ``xi + 2`` is uncertain, floored at ``1e-4``; ``m1 = 0``."""
    x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
    w2 = (xi + 2.0) ** 2
    s2 = PLANE_SOURCE_WIDTH ** 2
    m0 = np.maximum(PLANE_SOURCE_FLOOR, s2 / (8.0 * np.pi * w2) * np.exp(-0.5 * s2 * x * x / w2))
    return np.stack([m0, np.zeros_like(m0)], axis=-1)


def riemann(left, right, position=0.5, spread=0.0):
    """Two constant states separated at ``position + spread * xi``."""
    left = np.asarray(left, dtype=float)
    right = np.asarray(right, dtype=float)

    def u0(x, xi):
        x, xi = np.broadcast_arrays(np.asarray(x, dtype=float), np.asarray(xi, dtype=float))
        on_left = (x < position + spread * xi)[..., None]
        return np.where(on_left, left, right)

    return u0


def sod_uq(x, xi):
    return riemann(SOD_LEFT, SOD_RIGHT, 0.5, 0.05)(x, xi)


def shock_uq(x, xi):
    return riemann(SHOCK_LEFT, SHOCK_RIGHT, 0.5, 0.07)(x, xi)


@lru_cache(maxsize=8)
def _cached_table(size):
    return build_closure_table(size)


def load_table(config):
    if config.closure_table:
        return ClosureTable.from_csv(config.closure_table)
    return _cached_table(config.closure_size)


def build_model(config):
    if config.model == "euler":
        return Euler(config.gamma)
    if config.model == "m1":
        return M1(config.sigma_a, config.sigma_s, table=load_table(config))
    raise ConfigError(f"unknown model {config.model!r}")


def build_initial(config):
    if config.initial == "plane_source":
        return plane_source
    if config.initial == "sod_uq":
        return sod_uq
    if config.initial == "shock_uq":
        return shock_uq
    if config.initial == "custom":
        return riemann(config.left_state, config.right_state, config.interface, config.interface_spread)
    raise ConfigError(f"unknown initial condition {config.initial!r}")


def build_problem(config):
    """``(model, grid, u0)`` for a validated config."""
    grid = Grid(config.cells, config.x_left, config.x_right)
    return build_model(config), grid, build_initial(config)
