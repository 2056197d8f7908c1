"""Stochastic Galerkin uncertainty quantification for 1D hyperbolic systems.

Methods: hyperbolicity-preserving SG (limited), classical SG, operator
splitting, the intrusive polynomial moment method, and a Monte Carlo
reference.  Models: compressible Euler and the M1 radiative transfer model.
"""

from .analysis import cfl_diagnostic, error_l1, error_linf, limiter_summary
from .config import RunConfig, make_config, parse_config
from .gpc import build_basis, build_quadrature, evaluate_expansion, mean_and_std, project_function
from .methods import hsg_run, ipmm_run, mc_run, run_method, sg_run, splitting_run
from .records import RunResult
from .solver import Grid, MomentField

__version__ = "0.1.0"
