"""Plumbing shared by the method drivers."""

import time
from dataclasses import dataclass

import numpy as np

from ..gpc import build_basis, build_quadrature, mean_and_std, point_values
from ..initial import build_problem
from ..records import HyperbolicityEvent, RunResult

HYPERBOLICITY_LOSS = "hyperbolicity_loss"
COMPLETED = "completed"


@dataclass
class Problem:
    config: object
    model: object
    grid: object
    u0: object
    basis: object
    quad: object


def setup(config, model=None):
    built_model, grid, u0 = build_problem(config)
    return Problem(config=config, model=built_model if model is None else model, grid=grid, u0=u0,
                   basis=build_basis(config.K), quad=build_quadrature(config.Q))


def clip_step(dt, t, t_end):
    """Shorten ``dt`` to land on ``t_end``; returns ``(dt, new_time, last)``."""
    remaining = t_end - t
    if dt >= remaining * (1.0 - 1e-12):
        return remaining, t_end, True
    return dt, t + dt, False


def event_from_error(exc, step, t):
    return HyperbolicityEvent(step=step, time=t,
                              cell=-1 if exc.cell is None else int(exc.cell),
                              node=-1 if getattr(exc, "node", None) is None else int(exc.node),
                              kind=getattr(exc, "kind", type(exc).__name__), detail=str(exc))


def check_nodes(U, problem, step, t, events, kind):
    """Count (cell, node) pairs outside the hyperbolicity set; log one event if any."""
    V = point_values(U, problem.basis, problem.quad)
    bad = ~problem.model.admissible(V)
    n = int(np.count_nonzero(bad))
    if n:
        i, q = (int(j) for j in np.argwhere(bad)[0])
        events.append(HyperbolicityEvent(step, t, i, q, kind, f"{n} node states outside the set"))
    return n


def check_means(U, problem, step, t, events, kind="mean_outside_set"):
    bad = ~problem.model.admissible(U[..., 0, :])
    n = int(np.count_nonzero(bad))
    if n:
        i = int(np.flatnonzero(bad)[0])
        events.append(HyperbolicityEvent(step, t, i, -1, kind, f"{n} cell means outside the set"))
    return n


def finish(problem, method, field, started, status=COMPLETED, steps=0, limiter=None,
           events=None, message="", K=None):
    mean, std, _ = mean_and_std(field.U)
    return RunResult(
        method=method, model=problem.model.name, K=problem.config.K if K is None else K,
        grid=problem.grid, time=field.t, mean=mean, std=std,
        components=problem.model.components, status=status, steps=steps, limiter=limiter,
        events=events or [], wall_time=time.perf_counter() - started,
        fingerprint=problem.config.fingerprint(), coeffs=field.U, message=message,
    )
