"""M1 model of radiative transfer in slab geometry.

States carry ``(m0, m1)``: particle density and first velocity moment.  The
second moment is closed by the minimum-entropy (exponential) ansatz through
a :class:`~hsguq.models.closure.ClosureTable`.
"""

import numpy as np

from ..errors import ClosureDomainError
from .closure import (
    build_closure_table,
    closure_derivative,
    closure_moments,
    invert_langevin,
    m1_closure,
)

INTERIOR_MARGIN = 1e-9


def m1_admissible(u):
    """``m0 > 0`` and ``|m1| <= m0``."""
    u = np.asarray(u, dtype=float)
    m0, m1 = u[..., 0], u[..., 1]
    return (m0 > 0.0) & (np.abs(m1) <= m0)


def m1_admissible_interior(u, ref):
    """Admissible with ``|m1| <= (1 - 1e-9) m0`` and ``m0`` above ``1e-9`` of the reference."""
    u = np.asarray(u, dtype=float)
    ref = np.asarray(ref, dtype=float)
    m0, m1 = u[..., 0], u[..., 1]
    return ((m0 > 0.0) & (m0 > INTERIOR_MARGIN * ref[..., 0])
            & (np.abs(m1) <= (1.0 - INTERIOR_MARGIN) * m0))


def _ratio(u, where="flux"):
    u = np.asarray(u, dtype=float)
    ok = m1_admissible(u)
    if not np.all(ok):
        loc = tuple(int(i) for i in np.argwhere(~ok)[0])
        raise ClosureDomainError(
            f"{where}: M1 state {u[loc]!r} outside the realizable set at index {loc}",
            state=u[loc],
        )
    return u, u[..., 1] / u[..., 0]


def m1_flux(u, table):
    """``(m1, m0 chi(m1/m0))``."""
    u, r = _ratio(u)
    chi, _ = m1_closure(table, r)
    return np.stack([u[..., 1], u[..., 0] * chi], axis=-1)


def m1_source(u, sigma_a, sigma_s):
    u = np.asarray(u, dtype=float)
    return np.stack([-sigma_a * u[..., 0], -(sigma_a + sigma_s) * u[..., 1]], axis=-1)


def m1_b(u):
    """Every moment model of the kinetic equation admits ``b = 1``."""
    return np.ones(np.shape(u)[:-1])


def m1_wavespeed_bound(u):
    return np.ones(np.shape(u)[:-1])


def m1_jacobian(u, table):
    u, r = _ratio(u, "jacobian")
    chi, _ = m1_closure(table, r)
    dchi = closure_derivative(table, r)
    J = np.zeros(u.shape + (2,))
    J[..., 0, 1] = 1.0
    J[..., 1, 0] = chi - r * dchi
    J[..., 1, 1] = dchi
    return J


# -- entropy variables -------------------------------------------------------

def _log_sinhc(x):
    """``log(sinh(x) / x)`` without overflow or cancellation."""
    a = np.abs(np.asarray(x, dtype=float))
    out = np.empty_like(a)
    small = a < 1e-2
    large = a >= 20.0
    mid = ~small & ~large
    s = a[small] ** 2
    out[small] = s / 6.0 - s * s / 180.0 + s ** 3 / 2835.0
    out[mid] = np.log(np.sinh(a[mid]) / a[mid])
    al = a[large]
    out[large] = al - np.log(2.0 * al) + np.log1p(-np.exp(-2.0 * al))
    return out


def m1_entropy_gradient(u):
    """Multipliers ``(Lambda0, Lambda1)`` whose exponential ansatz has moments ``u``."""
    u, r = _ratio(u, "entropy gradient")
    lam1 = invert_langevin(r)
    lam0 = np.log(u[..., 0]) - np.log(2.0) - _log_sinhc(lam1)
    return np.stack([lam0, lam1], axis=-1)


def _inverse_moments(lam):
    lam = np.asarray(lam, dtype=float)
    l0, l1 = lam[..., 0], lam[..., 1]
    with np.errstate(over="ignore", invalid="ignore"):
        m0 = np.exp(l0 + np.log(2.0) + _log_sinhc(l1))
    r, chi, _ = closure_moments(l1)
    return m0, r, chi


def m1_entropy_inverse(lam, check=True):
    """``(int e^{L0 + v L1} dv, int v e^{L0 + v L1} dv)`` over ``v in [-1, 1]``."""
    m0, r, _ = _inverse_moments(lam)
    out = np.stack([m0, m0 * r], axis=-1)
    if check and not np.all(np.isfinite(out)):
        raise OverflowError("M1 entropy inverse overflowed")
    return out


def m1_entropy_inverse_jacobian(lam):
    """Hessian of the dual: ``[[m0, m1], [m1, m2]]``."""
    m0, r, chi = _inverse_moments(lam)
    J = np.empty(np.shape(m0) + (2, 2))
    J[..., 0, 0] = m0
    J[..., 0, 1] = J[..., 1, 0] = m0 * r
    J[..., 1, 1] = m0 * chi
    return J


class M1:
    """Model descriptor for M1 with absorption ``sigma_a`` and scattering ``sigma_s``."""

    name = "m1"
    violation_kind = "closure_domain"
    dim = 2
    components = ("m0", "m1")

    def __init__(self, sigma_a=0.0, sigma_s=1.0, table=None, table_size=2001):
        if sigma_a < 0 or sigma_s < 0:
            raise ValueError("absorption and scattering coefficients must be nonnegative")
        self.sigma_a = float(sigma_a)
        self.sigma_s = float(sigma_s)
        self.table = table if table is not None else build_closure_table(table_size)

    def __repr__(self):
        return f"M1(sigma_a={self.sigma_a}, sigma_s={self.sigma_s}, table_size={self.table.size})"

    @property
    def source_rate(self):
        return self.sigma_a + self.sigma_s

    def flux(self, u):
        return m1_flux(u, self.table)

    def admissible(self, u):
        return m1_admissible(u)

    def admissible_interior(self, u, ref):
        return m1_admissible_interior(u, ref)

    def wavespeed(self, u):
        return m1_wavespeed_bound(u)

    def b(self, u):
        return m1_b(u)

    def source(self, u):
        return m1_source(u, self.sigma_a, self.sigma_s)

    def jacobian(self, u):
        return m1_jacobian(u, self.table)

    def entropy_gradient(self, u):
        return m1_entropy_gradient(u)

    def entropy_gradient_inverse(self, lam, check=True):
        return m1_entropy_inverse(lam, check=check)

    def entropy_inverse_jacobian(self, lam):
        return m1_entropy_inverse_jacobian(lam)

    def dual_admissible(self, lam):
        return np.all(np.isfinite(np.asarray(lam, dtype=float)), axis=-1)

    def dual_flux(self, lam):
        # the exponential ansatz closes m2 exactly; no table lookup needed
        m0, r, chi = _inverse_moments(lam)
        u = np.stack([m0, m0 * r], axis=-1)
        return u, np.stack([m0 * r, m0 * chi], axis=-1)
