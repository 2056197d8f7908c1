"""Minimum-entropy closure of the two-moment (M1) radiative transfer model.

With the ansatz ``f(v) ∝ exp(lam * v)`` on ``v in [-1, 1]`` the normalised
moments are

    r   = <v>   = coth(lam) - 1/lam            (Langevin function)
    chi = <v^2> = 1 - 2 r / lam
    psi = <v^3> = coth(lam) - 3 chi / lam

The multiplier ``lam`` has no closed form in ``r``; a table over ``r`` is
built once and interpolated with a monotone (PCHIP) cubic.
"""

from dataclasses import dataclass, field

import numpy as np
from scipy.interpolate import PchipInterpolator
from scipy.special import bernoulli, factorial

from ..errors import ClosureDomainError, ConvergenceError

_SERIES_CUTOFF = 0.5
_NTERMS = 15
_n = np.arange(1, _NTERMS + 1)
# coth(x) - 1/x = sum_n c_n x^(2n-1), radius of convergence pi
_C = 2.0 ** (2 * _n) * bernoulli(2 * _NTERMS)[2 * _n] / factorial(2 * _n)

LAMBDA_BRACKET = 1e4


def _poly(x2, coeffs):
    # Horner in x^2
    out = np.zeros_like(x2)
    for c in coeffs[::-1]:
        out = out * x2 + c
    return out


def _split(lam):
    lam = np.asarray(lam, dtype=float)
    small = np.abs(lam) < _SERIES_CUTOFF
    return lam, small


def langevin(lam):
    """``coth(lam) - 1/lam``, with ``langevin(0) = 0``."""
    lam, small = _split(lam)
    out = np.empty_like(lam)
    ls = lam[small]
    out[small] = ls * _poly(ls * ls, _C)
    lb = lam[~small]
    out[~small] = 1.0 / np.tanh(lb) - 1.0 / lb
    return out


def langevin_derivative(lam):
    """``d/dlam langevin = chi - r^2``; positive everywhere."""
    lam, small = _split(lam)
    out = np.empty_like(lam)
    ls = lam[small]
    out[small] = _poly(ls * ls, _C * (2 * _n - 1))
    lb = lam[~small]
    with np.errstate(over="ignore"):
        out[~small] = 1.0 / (lb * lb) - 1.0 / np.sinh(lb) ** 2
    return out


def closure_moments(lam):
    """Return ``(r, chi, psi)`` for multipliers ``lam``."""
    lam, small = _split(lam)
    r = langevin(lam)
    chi = np.empty_like(lam)
    psi = np.empty_like(lam)
    ls = lam[small]
    x2 = ls * ls
    chi[small] = 1.0 - 2.0 * _poly(x2, _C)
    # psi = r + 6 * sum_{n>=2} c_n lam^(2n-3)
    psi[small] = r[small] + 6.0 * ls * _poly(x2, _C[1:])
    lb = lam[~small]
    chi[~small] = 1.0 - 2.0 * r[~small] / lb
    psi[~small] = 1.0 / np.tanh(lb) - 3.0 * chi[~small] / lb
    return r, chi, psi


def invert_langevin(r, tol=1e-14, max_iter=100):
    """Solve ``coth(lam) - 1/lam = r`` elementwise for ``|r| < 1``.

    Safeguarded Newton iteration inside the bracket ``[-1e4, 1e4]``; the
    starting guess is ``3 r`` (small ``|r|``) or ``sign(r) / (1 - |r|)``.
    """
    r = np.asarray(r, dtype=float)
    flat = r.ravel()
    limit = langevin(np.array([LAMBDA_BRACKET]))[0]
    bad = ~(np.abs(flat) < limit)
    if np.any(bad):
        i = int(np.flatnonzero(bad)[0])
        raise ConvergenceError(
            f"no multiplier inside +-{LAMBDA_BRACKET:g} for r={flat[i]!r}"
        )
    a = np.abs(flat)
    lam = np.where(a < 0.6, 3.0 * flat * (1.0 + 0.6 * flat * flat),
                   np.sign(flat) / np.maximum(1.0 - a, 1e-300))
    lam = np.clip(lam, -LAMBDA_BRACKET, LAMBDA_BRACKET)
    lo = np.full_like(flat, -LAMBDA_BRACKET)
    hi = np.full_like(flat, LAMBDA_BRACKET)
    active = flat != 0.0
    lam[~active] = 0.0
    for _ in range(max_iter):
        if not np.any(active):
            break
        la = lam[active]
        f = langevin(la) - flat[active]
        hi[active] = np.where(f > 0, la, hi[active])
        lo[active] = np.where(f <= 0, la, lo[active])
        step = f / langevin_derivative(la)
        new = la - step
        outside = ~((new >= lo[active]) & (new <= hi[active]))
        new = np.where(outside, 0.5 * (lo[active] + hi[active]), new)
        done = (np.abs(new - la) <= tol * np.maximum(1.0, np.abs(la))) | (f == 0.0) | (new == la)
        lam[active] = new
        idx = np.flatnonzero(active)
        active[idx[done]] = False
    else:
        i = int(np.flatnonzero(active)[0])
        raise ConvergenceError(
            f"multiplier iteration did not converge for r={flat[i]!r}"
        )
    return lam.reshape(r.shape)


@dataclass(frozen=True)
class ClosureTable:
    """Tabulated ``chi(r) = m2/m0`` and ``psi(r) = m3/m0`` on a uniform grid."""

    r: np.ndarray
    lambda1: np.ndarray
    chi: np.ndarray
    psi: np.ndarray
    _interp: dict = field(default_factory=dict, repr=False, compare=False)

    @property
    def size(self):
        return self.r.size

    def _interpolant(self, name):
        f = self._interp.get(name)
        if f is None:
            f = PchipInterpolator(self.r, getattr(self, name), extrapolate=False)
            self._interp[name] = f
        return f

    def to_csv(self, path):
        data = np.column_stack([self.r, self.lambda1, self.chi, self.psi])
        np.savetxt(path, data, fmt="%.17g", delimiter=",",
                   header="r,lambda1,chi,psi", comments="")

    @classmethod
    def from_csv(cls, path):
        data = np.loadtxt(path, delimiter=",", skiprows=1, ndmin=2)
        return cls(r=data[:, 0], lambda1=data[:, 1], chi=data[:, 2], psi=data[:, 3])


def build_closure_table(N=2001):
    """Tabulate the closure on ``N`` (odd) uniformly spaced ratios in [-1, 1]."""
    N = int(N)
    if N < 3 or N % 2 == 0:
        raise ValueError(f"closure table size must be odd and >= 3, got {N}")
    half = np.linspace(0.0, 1.0, (N + 1) // 2)
    lam = np.empty_like(half)
    chi = np.empty_like(half)
    psi = np.empty_like(half)
    interior = slice(1, -1)
    lam[interior] = invert_langevin(half[interior])
    _, chi[interior], psi[interior] = closure_moments(lam[interior])
    lam[0], chi[0], psi[0] = 0.0, 1.0 / 3.0, 0.0
    lam[-1], chi[-1], psi[-1] = np.inf, 1.0, 1.0
    # mirror: lambda and psi odd, chi even
    r = np.concatenate([-half[:0:-1], half])
    return ClosureTable(
        r=r,
        lambda1=np.concatenate([-lam[:0:-1], lam]),
        chi=np.concatenate([chi[:0:-1], chi]),
        psi=np.concatenate([-psi[:0:-1], psi]),
    )


def m1_closure(table, r):
    """Interpolated ``(chi, psi)`` at anisotropy ratios ``r``; ``|r| <= 1``."""
    r = np.asarray(r, dtype=float)
    if np.any(~(np.abs(r) <= 1.0)):
        i = int(np.flatnonzero(~(np.abs(r.ravel()) <= 1.0))[0])
        raise ClosureDomainError(f"closure requested at r={r.ravel()[i]!r}, outside [-1, 1]")
    return table._interpolant("chi")(r), table._interpolant("psi")(r)


def closure_derivative(table, r):
    """``d m2 / d m1 = (psi - chi r) / (chi - r^2)`` from the table.

    Where ``chi - r^2 < 1e-12`` the global bound 2 (with the sign of ``r``)
    is returned instead.
    """
    r = np.asarray(r, dtype=float)
    chi, psi = m1_closure(table, r)
    den = chi - r * r
    degenerate = den < 1e-12
    safe = np.where(degenerate, 1.0, den)
    return np.where(degenerate, 2.0 * np.sign(r), (psi - chi * r) / safe)
