"""Classical and hyperbolicity-preserving (limited) stochastic Galerkin drivers."""

import time

from ..errors import InadmissibleStateError
from ..records import LimiterRecord
from ..solver import apply_source, compute_time_step, initialize_field, lax_friedrichs_step
from .common import COMPLETED, HYPERBOLICITY_LOSS, check_means, check_nodes, clip_step, event_from_error, finish, setup
from .limiter import limit_field


def _galerkin_run(config, limited, model=None, observer=None):
    started = time.perf_counter()
    problem = setup(config, model)
    model, basis, quad = problem.model, problem.basis, problem.quad
    field = initialize_field(problem.u0, problem.grid, basis, quad, model)
    record = LimiterRecord() if limited else None
    events = []
    step = 0
    status, message = COMPLETED, ""

    def limit(step):
        U, theta = limit_field(field.U, basis, quad, model)
        record.add(step, field.t, theta)
        check_nodes(U, problem, step, field.t, events, "limited_state_outside_set")
        return field.with_values(U)

    try:
        if limited:
            field = limit(0)
        if observer is not None:
            observer(step, field)
        while field.t < config.t_end:
            step += 1
            ctrl = compute_time_step(field, model, basis, quad, config.cfl)
            dt, t_new, _ = clip_step(ctrl.dt, field.t, config.t_end)
            field = lax_friedrichs_step(field, model, basis, quad, dt)
            field = apply_source(field, model, dt)
            field = field.with_values(field.U, t=t_new)
            check_means(field.U, problem, step, field.t, events)
            if limited:
                field = limit(step)
            if observer is not None:
                observer(step, field)
    except InadmissibleStateError as exc:
        status, message = HYPERBOLICITY_LOSS, str(exc)
        events.append(event_from_error(exc, step, field.t))
    method = "hsg" if limited else "sg"
    return finish(problem, method, field, started, status=status, steps=step,
                  limiter=record, events=events, message=message)


def hsg_run(config, model=None, observer=None):
    """Limited SG: limit, step, apply source, limit, ... until ``t_end``.

    ``observer(step, field)`` is called after every limiter pass.
    """
    return _galerkin_run(config, True, model, observer)


def sg_run(config, model=None, observer=None):
    """Unlimited SG; stops with status ``hyperbolicity_loss`` when a node state leaves the set."""
    return _galerkin_run(config, False, model, observer)
