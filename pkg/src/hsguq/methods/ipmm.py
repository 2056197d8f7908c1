"""Intrusive polynomial moment method: gPC expansion of the entropic variables.

The state at a node is ``u = (grad s)^-1(sum_k Lambda_k phi_k)``, admissible by
construction.  Moments ``U`` are evolved with the SG Lax-Friedrichs update and
mapped back to entropic coefficients ``Lambda`` with a damped Newton solve per
cell.
"""

import time

import numpy as np

from ..errors import ConvergenceError, InadmissibleStateError
from ..gpc import point_values, project_values
from ..solver import apply_source, initialize_field, lax_friedrichs_update, step_size
from .common import COMPLETED, HYPERBOLICITY_LOSS, clip_step, event_from_error, finish, setup

NEWTON_TOL = 1e-8
NEWTON_MAX_ITER = 200
MAX_HALVINGS = 60
NEWTON_FAILURE = "newton_failure"


def _node_states(Lam, basis, quad, model):
    L = point_values(Lam, basis, quad)
    ok = np.all(model.dual_admissible(L), axis=-1)
    with np.errstate(over="ignore", invalid="ignore"):
        u = model.entropy_gradient_inverse(L, check=False)
    ok &= np.all(np.isfinite(u), axis=(-2, -1))
    return L, u, ok


def entropic_to_moments(Lam, basis, quad, model):
    """Moments ``u_j = sum_q w_q (grad s)^-1(Lambda(xi_q)) phi_j(xi_q)``."""
    Lam = np.asarray(Lam, dtype=float)
    L = point_values(Lam, basis, quad)
    bad = ~model.dual_admissible(L)
    if np.any(bad):
        loc = tuple(int(j) for j in np.argwhere(bad)[0])
        raise InadmissibleStateError(
            f"entropic expansion outside the dual domain at {loc}",
            cell=loc[0] if len(loc) > 1 else None, node=loc[-1], state=L[loc], kind="dual_domain",
        )
    return project_values(model.entropy_gradient_inverse(L), basis, quad)


def initial_entropic(U, model):
    """Start value: the pointwise dual of the cell mean in the ``k = 0`` block."""
    U = np.asarray(U, dtype=float)
    Lam = np.zeros_like(U)
    Lam[..., 0, :] = model.entropy_gradient(U[..., 0, :])
    return Lam


def moments_to_entropic(U, basis, quad, model, lam_init=None, tol=NEWTON_TOL, max_iter=NEWTON_MAX_ITER):
    """Solve ``entropic_to_moments(Lambda) = U`` cell by cell with damped Newton.

    The Jacobian ``sum_q w_q phi_j phi_k d(grad s)^-1/dLambda`` is symmetric
    positive definite.  Steps are halved until the iterate stays in the dual
    domain at every node and the residual 2-norm decreases.  Iteration stops
    when the max-norm residual drops below ``tol``.
    """
    U = np.asarray(U, dtype=float)
    shape = U.shape
    n1, d = shape[-2], shape[-1]
    U = U.reshape(-1, n1, d)
    Lam = initial_entropic(U, model) if lam_init is None else np.array(lam_init, dtype=float).reshape(U.shape)
    Phi = basis.vandermonde(quad)
    wphi = quad.effective_weights[:, None] * Phi

    def residual(Lam, target):
        _, u, ok = _node_states(Lam, basis, quad, model)
        with np.errstate(invalid="ignore", over="ignore"):
            R = target - project_values(u, basis, quad)
        ok &= np.all(np.isfinite(R), axis=(-2, -1))
        return R, ok

    R, ok = residual(Lam, U)
    if not np.all(ok):
        i = int(np.flatnonzero(~ok)[0])
        raise InadmissibleStateError(f"Newton start value outside the dual domain in cell {i}",
                                     cell=i, kind="dual_domain")
    active = np.flatnonzero(np.max(np.abs(R), axis=(-2, -1)) >= tol)
    for _ in range(max_iter):
        if active.size == 0:
            break
        La, Ua, Ra = Lam[active], U[active], R[active]
        L = point_values(La, basis, quad)
        J = model.entropy_inverse_jacobian(L)
        H = np.einsum("qj,qk,nqab->njakb", wphi, Phi, J).reshape(active.size, n1 * d, n1 * d)
        step = np.linalg.solve(H, Ra.reshape(active.size, n1 * d, 1)).reshape(Ra.shape)
        norm = np.linalg.norm(Ra.reshape(active.size, -1), axis=-1)
        alpha = np.ones(active.size)
        pending = np.ones(active.size, dtype=bool)
        new_L, new_R = La.copy(), Ra.copy()
        for _ in range(MAX_HALVINGS):
            idx = np.flatnonzero(pending)
            trial = La[idx] + alpha[idx, None, None] * step[idx]
            Rt, okt = residual(trial, Ua[idx])
            okt &= np.linalg.norm(Rt.reshape(idx.size, -1), axis=-1) < norm[idx]
            acc = idx[okt]
            new_L[acc], new_R[acc] = trial[okt], Rt[okt]
            pending[acc] = False
            if not np.any(pending):
                break
            alpha[pending] *= 0.5
        if np.any(pending):
            k = int(np.flatnonzero(pending)[0])
            cell = int(active[k])
            res = float(np.max(np.abs(Ra[k])))
            raise ConvergenceError(
                f"line search failed in cell {cell} (residual {res:.3e})", cell=cell, residual=res)
        Lam[active], R[active] = new_L, new_R
        active = active[np.max(np.abs(new_R), axis=(-2, -1)) >= tol]
    else:
        cell = int(active[0])
        res = float(np.max(np.abs(R[cell])))
        raise ConvergenceError(
            f"Newton solve did not converge in {max_iter} iterations in cell {cell} (residual {res:.3e})",
            cell=cell, residual=res)
    return Lam.reshape(shape)


def ipmm_run(config, model=None, observer=None):
    """IPMM: fluxes through ``(grad s)^-1`` at the nodes, moment update, Newton re-solve.

    The time step uses the pointwise CFL/b rule on the reconstructed node states.
    """
    started = time.perf_counter()
    problem = setup(config, model)
    model, basis, quad, grid = problem.model, problem.basis, problem.quad, problem.grid
    field = initialize_field(problem.u0, grid, basis, quad, model)
    events = []
    step = 0
    status, message = COMPLETED, ""
    try:
        Lam = moments_to_entropic(field.U, basis, quad, model, initial_entropic(field.U, model))
        if observer is not None:
            observer(step, field, Lam)
        while field.t < config.t_end:
            step += 1
            L = point_values(Lam, basis, quad)
            u_nodes, f_nodes = model.dual_flux(L)
            ctrl = step_size(u_nodes, model, grid.dx, config.cfl)
            dt, t_new, _ = clip_step(ctrl.dt, field.t, config.t_end)
            U = lax_friedrichs_update(field.U, project_values(f_nodes, basis, quad), dt / grid.dx)
            field = apply_source(field.with_values(U, t=t_new), model, dt)
            Lam = moments_to_entropic(field.U, basis, quad, model, Lam)
            if observer is not None:
                observer(step, field, Lam)
    except ConvergenceError as exc:
        status, message = NEWTON_FAILURE, f"step {step}: {exc}"
        events.append(event_from_error(exc, step, field.t))
    except InadmissibleStateError as exc:
        status, message = HYPERBOLICITY_LOSS, f"step {step}: {exc}"
        events.append(event_from_error(exc, step, field.t))
    return finish(problem, "ipmm", field, started, status=status, steps=step,
                  events=events, message=message)
