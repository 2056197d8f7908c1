"""Linear hyperbolic system ``u_t + A u_x = 0``; mainly a test model."""

import numpy as np


class LinearSystem:
    """Flux ``f(u) = A u`` with every state admissible."""

    name = "linear"
    violation_kind = "inadmissible"
    source_rate = 0.0

    def __init__(self, A):
        self.A = np.atleast_2d(np.asarray(A, dtype=float))
        self.dim = self.A.shape[0]
        self.components = tuple(f"u{i}" for i in range(self.dim))
        self._radius = float(np.max(np.abs(np.linalg.eigvals(self.A))))

    def flux(self, u):
        return np.asarray(u, dtype=float) @ self.A.T

    def admissible(self, u):
        return np.all(np.isfinite(np.asarray(u, dtype=float)), axis=-1)

    def admissible_interior(self, u, ref):
        return self.admissible(u)

    def wavespeed(self, u):
        return np.full(np.shape(u)[:-1], self._radius)

    def b(self, u):
        return np.full(np.shape(u)[:-1], np.inf)

    def source(self, u):
        return np.zeros_like(np.asarray(u, dtype=float))

    def jacobian(self, u):
        return np.broadcast_to(self.A, np.shape(u)[:-1] + self.A.shape)
