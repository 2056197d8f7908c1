"""Physical systems: compressible Euler and the M1 radiative transfer model."""

from .closure import (
    ClosureTable,
    build_closure_table,
    closure_derivative,
    invert_langevin,
    m1_closure,
)
from .euler import (
    Euler,
    euler_admissible,
    euler_b,
    euler_eigenvalues,
    euler_entropy,
    euler_entropy_gradient,
    euler_entropy_gradient_inverse,
    euler_flux,
    euler_wavespeed_bound,
)
from .linear import LinearSystem
from .m1 import (
    M1,
    m1_admissible,
    m1_b,
    m1_entropy_gradient,
    m1_entropy_inverse,
    m1_flux,
    m1_source,
    m1_wavespeed_bound,
)

__all__ = [
    "ClosureTable", "build_closure_table", "closure_derivative", "invert_langevin",
    "m1_closure", "Euler", "euler_admissible", "euler_b", "euler_eigenvalues",
    "euler_entropy", "euler_entropy_gradient", "euler_entropy_gradient_inverse",
    "euler_flux", "euler_wavespeed_bound", "LinearSystem", "M1", "m1_admissible",
    "m1_b", "m1_entropy_gradient", "m1_entropy_inverse", "m1_flux", "m1_source",
    "m1_wavespeed_bound",
]
