"""Hyperbolicity limiter: damp the higher gPC coefficients toward the mean."""

import numpy as np

from ..errors import InadmissibleStateError
from ..gpc import point_values

THETA_TOL = 1e-5
EPSILON = 1e-10


def limiter_theta(U, basis, quad, model, tol=THETA_TOL):
    """Smallest ``theta`` in [0, 1] making ``u_0 + (1 - theta) sum_{k>=1} u_k phi_k``
    admissible (with interior margin) at every quadrature node.

    ``U`` has shape ``(..., K+1, d)``; the result has shape ``U.shape[:-2]``.
    Bisection to absolute accuracy ``tol``.  If the mean sits on the boundary
    of the set (admissible, but not strictly inside), ``theta = 1`` is returned.
    """
    U = np.asarray(U, dtype=float)
    mean = U[..., 0, :]
    if not np.all(model.admissible(mean)):
        loc = tuple(int(j) for j in np.argwhere(~model.admissible(mean))[0])
        raise InadmissibleStateError(
            f"cell mean {mean[loc]!r} is inadmissible; cannot limit",
            cell=loc[0] if loc else None, state=mean[loc], kind=model.violation_kind,
        )
    V = point_values(U, basis, quad)
    ref = mean[..., None, :]
    dev = V - ref
    ok = np.all(model.admissible_interior(V, ref), axis=-1)
    theta = np.zeros(U.shape[:-2])
    need = ~ok
    if not np.any(need):
        return theta
    ref_n, dev_n = ref[need], dev[need]

    def passes(th):
        return np.all(model.admissible_interior(ref_n + (1.0 - th)[:, None, None] * dev_n, ref_n), axis=-1)

    lo = np.zeros(ref_n.shape[0])
    hi = np.ones(ref_n.shape[0])
    while np.max(hi - lo) > tol:
        mid = 0.5 * (lo + hi)
        good = passes(mid)
        hi = np.where(good, mid, hi)
        lo = np.where(good, lo, mid)
    theta[need] = hi
    return theta


def applied_theta(theta_hat, eps=EPSILON):
    """``0`` where ``theta_hat = 0``, otherwise ``min(theta_hat + eps, 1)``."""
    theta_hat = np.asarray(theta_hat, dtype=float)
    return np.where(theta_hat > 0.0, np.minimum(theta_hat + eps, 1.0), 0.0)


def apply_limiter(U, theta_hat, eps=EPSILON):
    """Scale the ``k >= 1`` coefficients by ``1 - theta``; returns ``(U_limited, theta)``."""
    U = np.array(U, dtype=float, copy=True)
    theta = applied_theta(theta_hat, eps)
    U[..., 1:, :] *= (1.0 - theta)[..., None, None]
    return U, theta


def limit_field(U, basis, quad, model):
    """Limit every cell; returns the limited coefficients and the applied ``theta`` per cell."""
    return apply_limiter(U, limiter_theta(U, basis, quad, model))
