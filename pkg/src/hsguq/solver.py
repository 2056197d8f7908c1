"""First-order finite-volume kernel for stochastic Galerkin moment systems.

A :class:`MomentField` stores, for each of the ``I`` cells, the gPC
coefficient block ``U_i`` of shape ``(K+1, d)``.  The Lax-Friedrichs update
acts on every coefficient, with the flux projected onto the basis by the
Gauss quadrature rule.
"""

from dataclasses import dataclass, replace

import numpy as np

from .errors import InadmissibleStateError
from .gpc import point_values, project_values


@dataclass(frozen=True)
class Grid:
    cells: int
    x_left: float
    x_right: float

    def __post_init__(self):
        if self.cells < 3:
            raise ValueError(f"need at least 3 cells, got {self.cells}")
        if not self.x_right > self.x_left:
            raise ValueError("domain must have positive length")

    @property
    def dx(self):
        return (self.x_right - self.x_left) / self.cells

    @property
    def centers(self):
        return self.x_left + (np.arange(self.cells) + 0.5) * self.dx


@dataclass(frozen=True)
class MomentField:
    """Coefficients ``U`` of shape ``(I, K+1, d)`` at time ``t``."""

    U: np.ndarray
    grid: Grid
    t: float = 0.0

    @property
    def K(self):
        return self.U.shape[-2] - 1

    def with_values(self, U, t=None):
        return replace(self, U=U, t=self.t if t is None else t)


@dataclass(frozen=True)
class StepControl:
    cfl: float
    b: float
    lambda_max: float
    dt: float


def _locate(mask):
    """First ``(cell, node)`` where ``mask`` is true."""
    i, q = np.argwhere(mask)[0][:2]
    return int(i), int(q)


def initialize_field(u0, grid, basis, quad, model):
    """Project ``u0(x, xi)`` onto the basis in every cell.

    ``u0`` is called once with broadcastable arrays ``x`` of shape ``(I, 1)``
    and ``xi`` of shape ``(1, Q)`` and must return shape ``(I, Q, d)``.
    """
    x = grid.centers[:, None]
    xi = quad.nodes[None, :]
    values = np.asarray(u0(x, xi), dtype=float)
    values = np.broadcast_to(values, (grid.cells, quad.Q, model.dim))
    ok = model.admissible(values)
    if not np.all(ok):
        bad = [tuple(int(j) for j in ij) for ij in np.argwhere(~ok)]
        i, q = bad[0]
        raise InadmissibleStateError(
            f"initial data inadmissible at {len(bad)} (cell, node) pairs, first {bad[:10]}",
            cell=i, node=q, state=values[i, q], kind="initial_data",
        )
    return MomentField(U=project_values(values, basis, quad), grid=grid, t=0.0)


def step_size(states, model, dx, cfl):
    """``StepControl`` from point states of any shape ``(..., d)``."""
    if not cfl > 0:
        raise ValueError(f"CFL number must be positive, got {cfl}")
    ok = model.admissible(states)
    if not np.all(ok):
        loc = tuple(int(j) for j in np.argwhere(~ok)[0])
        raise InadmissibleStateError(
            f"time step requested with inadmissible state at {loc}",
            cell=loc[0], node=loc[1] if len(loc) >= 2 else None,
            state=states[loc], kind=model.violation_kind,
        )
    b = float(np.min(model.b(states)))
    lam = float(np.max(model.wavespeed(states)))
    dt = cfl * min(b * dx, dx / lam)
    rate = model.source_rate
    if rate > 0:
        dt = min(dt, 1.0 / rate)
    return StepControl(cfl=cfl, b=b, lambda_max=lam, dt=dt)


def compute_time_step(field, model, basis, quad, cfl=0.95):
    """Global step from the minimal ``b`` and maximal wavespeed over all cells and nodes."""
    V = point_values(field.U, basis, quad)
    return step_size(V, model, field.grid.dx, cfl)


def fill_boundary(U):
    """Zero-gradient boundary: first and last cell copy their interior neighbours."""
    U = np.array(U, copy=True)
    U[..., 0, :, :] = U[..., 1, :, :]
    U[..., -1, :, :] = U[..., -2, :, :]
    return U


def lax_friedrichs_update(U, projected_flux, ratio):
    """Interior Lax-Friedrichs update on arrays with the cell axis at ``-3``.

    ``ratio`` is ``dt / dx`` and may carry leading batch axes.
    """
    ratio = np.asarray(ratio, dtype=float)
    if ratio.ndim:
        ratio = ratio[..., None, None, None]
    new = np.empty_like(U)
    new[..., 1:-1, :, :] = (0.5 * (U[..., 2:, :, :] + U[..., :-2, :, :])
                            - 0.5 * ratio * (projected_flux[..., 2:, :, :]
                                             - projected_flux[..., :-2, :, :]))
    return fill_boundary(new)


def lax_friedrichs_step(field, model, basis, quad, dt, flux=None):
    """One Lax-Friedrichs step of the SG system.

    With the default ``flux=None`` the model flux is used and every quadrature
    state must be admissible.  A custom ``flux`` callable (node states to node
    fluxes) skips that check; the splitting method uses it for its subsystems.
    """
    V = point_values(field.U, basis, quad)
    if flux is None:
        ok = model.admissible(V)
        if not np.all(ok):
            i, q = _locate(~ok)
            raise InadmissibleStateError(
                f"flux evaluation at inadmissible state {V[i, q]!r} (cell {i}, node {q})",
                cell=i, node=q, state=V[i, q],
                kind=model.violation_kind,
            )
        F = model.flux(V)
    else:
        F = flux(V)
    P = project_values(F, basis, quad)
    U = lax_friedrichs_update(field.U, P, dt / field.grid.dx)
    return field.with_values(U, t=field.t + dt)


def apply_source(field, model, dt):
    """Explicit Euler update with the (linear) source, coefficient by coefficient."""
    rate = model.source_rate
    if rate == 0:
        return field
    if dt > 1.0 / rate * (1.0 + 1e-14):
        raise ValueError(f"dt={dt} exceeds the source bound 1/(sigma_a+sigma_s)={1.0 / rate}")
    return field.with_values(field.U + dt * model.source(field.U))
