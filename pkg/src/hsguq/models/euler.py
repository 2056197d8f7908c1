"""One-dimensional compressible Euler equations for an ideal gas.

States are arrays with a trailing axis ``(rho, m, E)``: density, momentum
and total energy.  All functions are vectorised over leading axes.
"""

import numpy as np

from ..errors import InadmissibleStateError

#: relative margin used when a limiter must land strictly inside the set
INTERIOR_MARGIN = 1e-9


def _split(u):
    u = np.asarray(u, dtype=float)
    return u, u[..., 0], u[..., 1], u[..., 2]


def pressure(u, gamma=1.4):
    u, rho, m, E = _split(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        return (gamma - 1.0) * (E - 0.5 * m * m / rho)


def _first_bad(mask):
    idx = np.argwhere(mask)
    return tuple(int(i) for i in idx[0]) if idx.size else None


def _require_admissible(u, gamma, what):
    ok = euler_admissible(u, gamma)
    if not np.all(ok):
        loc = _first_bad(~ok)
        raise InadmissibleStateError(
            f"{what}: inadmissible Euler state {np.asarray(u)[loc]!r} at index {loc}",
            state=np.asarray(u)[loc],
        )


def euler_flux(u, gamma=1.4):
    """Physical flux ``(m, m^2/rho + p, (E + p) m / rho)``."""
    u, rho, m, E = _split(u)
    if np.any(rho == 0.0):
        loc = _first_bad(rho == 0.0)
        raise InadmissibleStateError(f"zero density at index {loc}", state=u[loc])
    v = m / rho
    p = (gamma - 1.0) * (E - 0.5 * m * v)
    return np.stack([m, m * v + p, (E + p) * v], axis=-1)


def euler_admissible(u, gamma=1.4):
    """``rho > 0`` and ``p > 0``."""
    u, rho, m, E = _split(u)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = (gamma - 1.0) * (E - 0.5 * m * m / rho)
        return (rho > 0.0) & (p > 0.0)


def euler_admissible_interior(u, ref, gamma=1.4):
    """Admissible with density and pressure at least ``1e-9`` of the reference."""
    u, rho, m, E = _split(u)
    ref = np.asarray(ref, dtype=float)
    with np.errstate(divide="ignore", invalid="ignore"):
        p = (gamma - 1.0) * (E - 0.5 * m * m / rho)
        rho_floor = INTERIOR_MARGIN * ref[..., 0]
        p_floor = INTERIOR_MARGIN * pressure(ref, gamma)
        return (rho > rho_floor) & (rho > 0.0) & (p > p_floor) & (p > 0.0)


def sound_speed(u, gamma=1.4):
    u, rho, m, E = _split(u)
    return np.sqrt(gamma * pressure(u, gamma) / rho)


def euler_eigenvalues(u, gamma=1.4):
    """Eigenvalues ``v - a, v, v + a`` of the flux Jacobian."""
    _require_admissible(u, gamma, "eigenvalues")
    u, rho, m, E = _split(u)
    v = m / rho
    a = sound_speed(u, gamma)
    return np.stack([v - a, v, v + a], axis=-1)


def euler_wavespeed_bound(u, gamma=1.4):
    """``|m/rho| + sqrt(gamma p / rho)``."""
    _require_admissible(u, gamma, "wavespeed bound")
    u, rho, m, E = _split(u)
    return np.abs(m / rho) + sound_speed(u, gamma)


def euler_b(u, gamma=1.4):
    """Largest ``b`` such that ``u +- b' f(u)`` stays admissible for ``b' < b``.

    Both pressure conditions reduce to the quadratic
    ``X b^2 + 8 m rho b + 4 rho^2 = 0`` with roots ``-2 rho / (2m +- (gamma-1) s)``,
    ``s = sqrt(2 E rho - m^2)``; taking both signs of ``b`` gives
    ``2 rho / (2|m| + (gamma-1) s)``.  The density condition ``rho / |m|`` is
    kept for completeness (it never binds) and dropped when ``m = 0``.
    """
    _require_admissible(u, gamma, "b-parameter")
    u, rho, m, E = _split(u)
    s = np.sqrt(2.0 * E * rho - m * m)
    b_pressure = 2.0 * rho / (2.0 * np.abs(m) + (gamma - 1.0) * s)
    with np.errstate(divide="ignore"):
        b_density = np.where(m == 0.0, np.inf, rho / np.abs(m))
    return np.minimum(b_pressure, b_density)


def euler_jacobian(u, gamma=1.4):
    """Flux Jacobian ``df/du`` with shape ``(..., 3, 3)``."""
    u, rho, m, E = _split(u)
    v = m / rho
    g1 = gamma - 1.0
    H = (E + pressure(u, gamma)) / rho
    J = np.zeros(u.shape + (3,))
    J[..., 0, 1] = 1.0
    J[..., 1, 0] = 0.5 * (gamma - 3.0) * v * v
    J[..., 1, 1] = (3.0 - gamma) * v
    J[..., 1, 2] = g1
    J[..., 2, 0] = v * (0.5 * g1 * v * v - H)
    J[..., 2, 1] = H - g1 * v * v
    J[..., 2, 2] = gamma * v
    return J


# -- entropy variables -------------------------------------------------------

def euler_entropy(u, gamma=1.4):
    """Mathematical entropy ``-rho ln(rho^-gamma (E - m^2 / 2 rho))`` (convex)."""
    u, rho, m, E = _split(u)
    return -rho * np.log(rho ** (-gamma) * (E - 0.5 * m * m / rho))


def euler_entropy_gradient(u, gamma=1.4):
    """Entropic variables ``Lambda = grad s(u)``; ``Lambda_2 < 0`` on the set."""
    _require_admissible(u, gamma, "entropy gradient")
    u, rho, m, E = _split(u)
    D = 2.0 * E * rho - m * m
    lam0 = -np.log(D / (2.0 * rho ** (gamma + 1.0))) + gamma - m * m / D
    lam1 = 2.0 * rho * m / D
    lam2 = -2.0 * rho * rho / D
    return np.stack([lam0, lam1, lam2], axis=-1)


def _inverse_parts(lam, gamma):
    lam = np.asarray(lam, dtype=float)
    l0, l1, l2 = lam[..., 0], lam[..., 1], lam[..., 2]
    g1 = gamma - 1.0
    with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
        theta = (l0 - np.log(-l2) - gamma) / g1 - l1 * l1 / (2.0 * l2 * g1)
        rho = np.exp(theta)
        v = -l1 / l2
        e = l1 * l1 / (2.0 * l2 * l2) - 1.0 / l2
    return l0, l1, l2, g1, rho, v, e


def euler_dual_admissible(lam):
    """The inverse map is defined iff ``Lambda_2 < 0``."""
    return np.asarray(lam, dtype=float)[..., 2] < 0.0


def euler_entropy_gradient_inverse(lam, gamma=1.4, check=True):
    """Closed-form ``(grad s)^-1``; output always has ``rho, p > 0``."""
    lam = np.asarray(lam, dtype=float)
    if check and np.any(~euler_dual_admissible(lam)):
        loc = _first_bad(~euler_dual_admissible(lam))
        raise InadmissibleStateError(
            f"entropic variable with Lambda_2 >= 0 at index {loc}", state=lam[loc],
            kind="dual_domain",
        )
    *_, rho, v, e = _inverse_parts(lam, gamma)
    out = np.stack([rho, v * rho, e * rho], axis=-1)
    if check and not np.all(np.isfinite(out)):
        raise OverflowError("entropy inverse overflowed")
    return out


def euler_entropy_inverse_jacobian(lam, gamma=1.4):
    """``d u / d Lambda`` of the inverse map, shape ``(..., 3, 3)``; SPD."""
    l0, l1, l2, g1, rho, v, e = _inverse_parts(lam, gamma)
    dtheta = np.stack([np.full_like(l0, 1.0 / g1),
                       -l1 / (l2 * g1),
                       (-1.0 / l2 + l1 * l1 / (2.0 * l2 * l2)) / g1], axis=-1)
    dv = np.stack([np.zeros_like(l0), -1.0 / l2, l1 / (l2 * l2)], axis=-1)
    de = np.stack([np.zeros_like(l0), l1 / (l2 * l2),
                   -l1 * l1 / (l2 ** 3) + 1.0 / (l2 * l2)], axis=-1)
    drho = rho[..., None] * dtheta
    J = np.empty(np.shape(l0) + (3, 3))
    J[..., 0, :] = drho
    J[..., 1, :] = v[..., None] * drho + rho[..., None] * dv
    J[..., 2, :] = e[..., None] * drho + rho[..., None] * de
    return J


class Euler:
    """Model descriptor for the Euler equations with adiabatic constant ``gamma``."""

    name = "euler"
    violation_kind = "inadmissible"
    dim = 3
    components = ("rho", "m", "E")
    source_rate = 0.0

    def __init__(self, gamma=1.4):
        if not gamma > 1.0:
            raise ValueError(f"adiabatic constant must exceed 1, got {gamma}")
        self.gamma = float(gamma)

    def __repr__(self):
        return f"Euler(gamma={self.gamma})"

    def flux(self, u):
        return euler_flux(u, self.gamma)

    def admissible(self, u):
        return euler_admissible(u, self.gamma)

    def admissible_interior(self, u, ref):
        return euler_admissible_interior(u, ref, self.gamma)

    def wavespeed(self, u):
        return euler_wavespeed_bound(u, self.gamma)

    def b(self, u):
        return euler_b(u, self.gamma)

    def source(self, u):
        return np.zeros_like(np.asarray(u, dtype=float))

    def jacobian(self, u):
        return euler_jacobian(u, self.gamma)

    def pressure(self, u):
        return pressure(u, self.gamma)

    # entropy hooks for the intrusive polynomial moment method
    def entropy_gradient(self, u):
        return euler_entropy_gradient(u, self.gamma)

    def entropy_gradient_inverse(self, lam, check=True):
        return euler_entropy_gradient_inverse(lam, self.gamma, check=check)

    def entropy_inverse_jacobian(self, lam):
        return euler_entropy_inverse_jacobian(lam, self.gamma)

    def dual_admissible(self, lam):
        return euler_dual_admissible(lam)

    def dual_flux(self, lam):
        u = self.entropy_gradient_inverse(lam, check=False)
        return u, self.flux(u)
