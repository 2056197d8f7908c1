"""Lie operator splitting of the SG system into one linear system and two scalar laws.

Each subsystem is SG-hyperbolic on its own, so every substep is an ordinary
SG Lax-Friedrichs step with a subsystem flux.  The sum of the three fluxes is
the full model flux.  The splitting parameter ``a`` bounds the subsystem
wavespeeds; its sign alternates from one time step to the next.
"""

import time

import numpy as np

from ..errors import InadmissibleStateError
from ..gpc import point_values
from ..models.closure import closure_derivative, m1_closure
from ..records import HyperbolicityEvent
from ..solver import apply_source, initialize_field, lax_friedrichs_step
from .common import COMPLETED, HYPERBOLICITY_LOSS, clip_step, event_from_error, finish, setup


def _coefficients(field):
    return np.asarray(getattr(field, "U", field), dtype=float)


# -- Euler ---------------------------------------------------------------------

def euler_subsystem_fluxes(a, gamma):
    """Node-state fluxes of the three Euler subsystems for splitting parameter ``a``."""
    g1 = gamma - 1.0

    def linear(V):
        rho, m, E = V[..., 0], V[..., 1], V[..., 2]
        return np.stack([m, g1 * E + a * m, -a * E], axis=-1)

    def momentum(V):
        rho, m = V[..., 0], V[..., 1]
        z = np.zeros_like(rho)
        return np.stack([z, 0.5 * (3.0 - gamma) * m * m / rho - a * m, z], axis=-1)

    def energy(V):
        rho, m, E = V[..., 0], V[..., 1], V[..., 2]
        z = np.zeros_like(rho)
        v = m / rho
        return np.stack([z, z, v * (gamma * E - 0.5 * g1 * m * v) + a * E], axis=-1)

    return linear, momentum, energy


def _euler_node_bounds(V, gamma):
    """Per-node ``max(|v| + c, gamma |v|, (3 - gamma) |v|)`` with diagnostic masks.

    The sound-speed term is dropped where ``gamma p / rho < 0`` (it would be
    complex).  Returns ``(bound, negative_pressure, negative_density, v)``.
    A vanishing density makes the velocity undefined and aborts.
    """
    rho, m, E = V[..., 0], V[..., 1], V[..., 2]
    if np.any(~(rho != 0.0)):
        i, q = (int(j) for j in np.argwhere(~(rho != 0.0))[0][:2])
        raise InadmissibleStateError(
            f"vanishing density at cell {i}, node {q}",
            cell=i, node=q, state=V[i, q], kind="zero_density",
        )
    v = m / rho
    p = (gamma - 1.0) * (E - 0.5 * m * v)
    c2 = gamma * p / rho
    complex_speed = c2 < 0.0
    acoustic = np.where(complex_speed, 0.0, np.abs(v) + np.sqrt(np.where(complex_speed, 0.0, c2)))
    bound = np.maximum(acoustic, np.maximum(gamma, 3.0 - gamma) * np.abs(v))
    return bound, p < 0.0, rho < 0.0, v


def euler_splitting_parameter(field, basis, quad, gamma=1.4, sign=1.0):
    """``sign * sup`` over cells and nodes of the subsystem wavespeed bounds."""
    V = point_values(_coefficients(field), basis, quad)
    bound = _euler_node_bounds(V, gamma)[0]
    return float(np.copysign(np.max(bound), sign))


def euler_split_wavespeed(v, a, gamma):
    """Largest subsystem wavespeed: ``a`` (linear), ``(3-gamma) v - a``, ``gamma v + a``."""
    return float(np.max(np.maximum(abs(a), np.maximum(np.abs((3.0 - gamma) * v - a),
                                                          np.abs(gamma * v + a)))))


# -- M1 ------------------------------------------------------------------------

def clamped_ratio(V):
    """``m1/m0`` clamped to [-1, 1]; zero where ``m0 = 0``."""
    m0, m1 = V[..., 0], V[..., 1]
    with np.errstate(divide="ignore", invalid="ignore"):
        r = np.where(m0 != 0.0, m1 / np.where(m0 != 0.0, m0, 1.0), 0.0)
    return np.clip(r, -1.0, 1.0)


def m1_subsystem_fluxes(a, table):
    def linear(V):
        m0, m1 = V[..., 0], V[..., 1]
        return np.stack([m1 + a * m0, -a * m1], axis=-1)

    def density(V):
        m0 = V[..., 0]
        return np.stack([-a * m0, np.zeros_like(m0)], axis=-1)

    def closure(V):
        m0, m1 = V[..., 0], V[..., 1]
        chi, _ = m1_closure(table, clamped_ratio(V))
        return np.stack([np.zeros_like(m0), m0 * chi + a * m1], axis=-1)

    return linear, density, closure


def m1_splitting_parameter(field, basis, quad, table, sign=1.0):
    """``sign * sup max(1, |d m2 / d m1|)`` over cells and nodes, ratios clamped."""
    V = point_values(_coefficients(field), basis, quad)
    d = np.abs(closure_derivative(table, clamped_ratio(V)))
    return float(np.copysign(max(1.0, float(np.max(d))), sign))


# -- driver --------------------------------------------------------------------

def splitting_run(config, model=None, observer=None):
    """Lie splitting: subsystems 1, 2, 3 in turn, each one SG Lax-Friedrichs step.

    Hyperbolicity-loss situations (negative pressure or density while
    computing ``a``, clamped M1 ratios) are logged and the run continues.
    Non-finite states or a vanishing density abort the run.
    """
    started = time.perf_counter()
    problem = setup(config, model)
    model, basis, quad, grid = problem.model, problem.basis, problem.quad, problem.grid
    field = initialize_field(problem.u0, grid, basis, quad, model)
    events = []
    step = 0
    sign = 1.0
    status, message = COMPLETED, ""
    if observer is not None:
        observer(step, field)
    try:
        while field.t < config.t_end:
            step += 1
            V = point_values(field.U, basis, quad)
            if model.name == "euler":
                bound, neg_p, neg_rho, v = _euler_node_bounds(V, model.gamma)
                for mask, kind, what in ((neg_p, "negative_pressure", "pressure"),
                                         (neg_rho, "negative_density", "density")):
                    if np.any(mask):
                        i, q = (int(j) for j in np.argwhere(mask)[0])
                        events.append(HyperbolicityEvent(
                            step, field.t, i, q, kind,
                            f"{int(np.count_nonzero(mask))} node states with negative {what} "
                            "while computing the splitting parameter"))
                a = float(np.copysign(np.max(bound), sign))
                lam = euler_split_wavespeed(v, a, model.gamma)
                fluxes = euler_subsystem_fluxes(a, model.gamma)
            elif model.name == "m1":
                outside = ~model.admissible(V)
                if np.any(outside):
                    i, q = (int(j) for j in np.argwhere(outside)[0])
                    events.append(HyperbolicityEvent(
                        step, field.t, i, q, "ratio_clamped",
                        f"{int(np.count_nonzero(outside))} node states outside the set, ratio clamped"))
                d = closure_derivative(model.table, clamped_ratio(V))
                a = float(np.copysign(max(1.0, float(np.max(np.abs(d)))), sign))
                lam = float(max(abs(a), np.max(np.abs(d + a))))
                fluxes = m1_subsystem_fluxes(a, model.table)
            else:
                raise ValueError(f"no splitting for model {model.name!r}")
            dt = config.cfl * grid.dx / lam
            if model.source_rate > 0:
                dt = min(dt, 1.0 / model.source_rate)
            dt, t_new, _ = clip_step(dt, field.t, config.t_end)
            for n, flux in enumerate(fluxes):
                with np.errstate(divide="ignore", invalid="ignore", over="ignore"):
                    field = lax_friedrichs_step(field, model, basis, quad, dt, flux=flux)
                if n == 0:
                    field = apply_source(field, model, dt)
            if not np.all(np.isfinite(field.U)):
                i = int(np.argwhere(~np.isfinite(field.U))[0][0])
                raise InadmissibleStateError(f"non-finite state in cell {i} after step {step}",
                                             cell=i, kind="non_finite")
            field = field.with_values(field.U, t=t_new)
            sign = -sign
            if observer is not None:
                observer(step, field)
    except InadmissibleStateError as exc:
        status, message = HYPERBOLICITY_LOSS, str(exc)
        events.append(event_from_error(exc, step, field.t))
    return finish(problem, "split", field, started, status=status, steps=step,
                  events=events, message=message)
