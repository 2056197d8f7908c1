"""Generalized polynomial chaos in one uniform random variable.

The random input is ``xi ~ U(-1, 1)`` with density ``1/2``.  The basis
consists of Legendre polynomials normalised so that

    <phi_i, phi_j> = int_{-1}^{1} phi_i phi_j / 2 dxi = delta_ij,

and every integral against the density is approximated with a Gauss-Legendre
rule whose effective weights already contain the factor ``1/2``.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConvergenceError

#: density of the uniform distribution on [-1, 1]
DENSITY = 0.5


def _legendre_and_derivative(n, x):
    """Return ``P_n(x)`` and ``P_n'(x)`` via the three-term recurrence."""
    x = np.asarray(x, dtype=float)
    p_prev = np.ones_like(x)
    if n == 0:
        return p_prev, np.zeros_like(x)
    p = x.copy()
    for k in range(1, n):
        p_prev, p = p, ((2 * k + 1) * x * p - k * p_prev) / (k + 1)
    dp = n * (x * p - p_prev) / (x * x - 1.0)
    return p, dp


@dataclass(frozen=True)
class QuadratureRule:
    """Q-point Gauss-Legendre rule on [-1, 1].

    ``weights`` are the standard weights (sum 2), ``effective_weights`` are
    ``DENSITY * weights`` (sum 1) and are what every projection uses.
    """

    nodes: np.ndarray
    weights: np.ndarray

    @property
    def Q(self):
        return self.nodes.size

    @property
    def effective_weights(self):
        return DENSITY * self.weights

    def integrate(self, values):
        """Expected value of ``values`` sampled at the nodes (node axis first)."""
        return np.tensordot(self.effective_weights, values, axes=(0, 0))


def build_quadrature(Q, max_iter=100, tol=1e-15):
    """Gauss-Legendre nodes and weights by Newton iteration on ``P_Q``.

    Chebyshev points serve as initial guesses.  Raises ``ConvergenceError``
    if the iteration cap is exceeded.
    """
    Q = int(Q)
    if Q < 1:
        raise ValueError(f"quadrature needs Q >= 1, got {Q}")
    m = (Q + 1) // 2
    i = np.arange(1, m + 1)
    x = np.cos(np.pi * (i - 0.25) / (Q + 0.5))
    for _ in range(max_iter):
        p, dp = _legendre_and_derivative(Q, x)
        dx = p / dp
        x = x - dx
        if np.max(np.abs(dx)) <= tol:
            break
    else:
        raise ConvergenceError(
            f"Legendre root iteration for Q={Q} did not converge in {max_iter} steps"
        )
    _, dp = _legendre_and_derivative(Q, x)
    w = 2.0 / ((1.0 - x * x) * dp * dp)
    # x is descending and positive; mirror to the full symmetric set
    nodes = np.concatenate([-x, x[::-1][Q % 2:]])
    weights = np.concatenate([w, w[::-1][Q % 2:]])
    if Q % 2:
        nodes[m - 1] = 0.0
    return QuadratureRule(nodes=nodes, weights=weights)


@dataclass(frozen=True)
class GpcBasis:
    """Orthonormal Legendre basis ``phi_0..phi_K`` for ``xi ~ U(-1, 1)``."""

    K: int
    _cache: dict = field(default_factory=dict, repr=False, compare=False)

    def __post_init__(self):
        if self.K < 0:
            raise ValueError(f"truncation order must be >= 0, got {self.K}")

    @property
    def size(self):
        return self.K + 1

    def evaluate(self, xi):
        """Values ``phi_k(xi)`` with shape ``xi.shape + (K+1,)``."""
        xi = np.asarray(xi, dtype=float)
        out = np.empty(xi.shape + (self.K + 1,))
        p_prev = np.ones_like(xi)
        out[..., 0] = 1.0
        if self.K >= 1:
            p = xi.copy()
            out[..., 1] = np.sqrt(3.0) * p
            for k in range(1, self.K):
                p_prev, p = p, ((2 * k + 1) * xi * p - k * p_prev) / (k + 1)
                out[..., k + 1] = np.sqrt(2.0 * (k + 1) + 1.0) * p
        return out

    def vandermonde(self, quad):
        """Matrix ``phi_k(xi_q)`` of shape (Q, K+1), cached per rule."""
        key = quad.nodes.tobytes()
        mat = self._cache.get(key)
        if mat is None:
            mat = self.evaluate(quad.nodes)
            mat.setflags(write=False)
            self._cache[key] = mat
        return mat


def build_basis(K):
    return GpcBasis(int(K))


def evaluate_expansion(coeffs, basis, xi):
    """Evaluate ``sum_k u_k phi_k(xi)``.

    ``coeffs`` has shape ``(K+1,)`` or ``(K+1, d)``; the result has shape
    ``xi.shape`` or ``xi.shape + (d,)``.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    if coeffs.shape[0] != basis.size:
        raise ValueError(
            f"expected {basis.size} coefficient vectors, got {coeffs.shape[0]}"
        )
    return np.tensordot(basis.evaluate(xi), coeffs, axes=(-1, 0))


def point_values(coeffs, basis, quad):
    """Expansion values at every quadrature node: ``(..., K+1, d) -> (..., Q, d)``."""
    return np.einsum("qk,...kd->...qd", basis.vandermonde(quad), coeffs)


def project_values(values, basis, quad):
    """Galerkin projection of node values: ``(..., Q, d) -> (..., K+1, d)``."""
    phi = basis.vandermonde(quad)
    return np.einsum("qk,q,...qd->...kd", phi, quad.effective_weights, values)


def project_function(g, basis, quad):
    """Coefficients ``u_k = sum_q g(xi_q) phi_k(xi_q) w_q / 2``.

    ``g`` maps a node ``xi`` to a state vector (or scalar).
    """
    values = np.array([np.atleast_1d(g(x)) for x in quad.nodes], dtype=float)
    return project_values(values, basis, quad)


def mean_and_std(coeffs):
    """Mean ``u_0`` and standard deviation ``sqrt(sum_{k>=1} u_k^2)``.

    Returns ``(mean, std, meaningful)``; for ``K = 0`` the std is zero and
    ``meaningful`` is False.
    """
    coeffs = np.asarray(coeffs, dtype=float)
    mean = coeffs[..., 0, :].copy()
    var = np.sum(coeffs[..., 1:, :] ** 2, axis=-2)
    std = np.sqrt(np.maximum(var, 0.0))
    return mean, std, coeffs.shape[-2] > 1
