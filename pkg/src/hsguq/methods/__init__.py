"""Uncertainty-quantification method drivers."""

from .ipmm import entropic_to_moments, initial_entropic, ipmm_run, moments_to_entropic
from .limiter import apply_limiter, applied_theta, limit_field, limiter_theta
from .montecarlo import deterministic_solve, mc_run, merge_stats, sample_points
from .sg import hsg_run, sg_run
from .splitting import (
    clamped_ratio,
    euler_splitting_parameter,
    euler_subsystem_fluxes,
    m1_splitting_parameter,
    m1_subsystem_fluxes,
    splitting_run,
)

DRIVERS = {
    "hsg": hsg_run,
    "sg": sg_run,
    "split": splitting_run,
    "ipmm": ipmm_run,
    "mc": mc_run,
}


def run_method(config, model=None):
    """Dispatch on ``config.method``."""
    return DRIVERS[config.method](config, model=model)
