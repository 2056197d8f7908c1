"""Monte Carlo reference: many deterministic Lax-Friedrichs solves at sampled ``xi``.

A deterministic solve is the SG kernel with ``K = 0`` and one node pinned at
the sample.  Samples are batched along a leading axis, each with its own time
step, and their statistics are merged chunk by chunk with the pairwise
(Chan et al.) update so the result does not depend on the thread count.
"""

import os
import time
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from ..errors import InadmissibleStateError
from ..records import RunResult
from ..solver import lax_friedrichs_update
from .common import setup

CHUNK = 64
THREADS_ENV = "HSGUQ_THREADS"


def sample_points(samples, seed):
    """``xi_s`` uniform on [-1, 1] from the substream ``(seed, s)``."""
    return np.array([np.random.default_rng([seed, s]).uniform(-1.0, 1.0) for s in range(samples)])


def deterministic_solve(problem, xi):
    """Solve to ``t_end`` for each ``xi``; returns states of shape ``(S, I, d)``."""
    config, model, grid = problem.config, problem.model, problem.grid
    xi = np.atleast_1d(np.asarray(xi, dtype=float))
    U = np.asarray(problem.u0(grid.centers[None, :], xi[:, None]), dtype=float)[:, :, None, :].copy()
    t = np.zeros(xi.size)
    dx, t_end, rate = grid.dx, config.t_end, model.source_rate
    while True:
        act = np.flatnonzero(t < t_end)
        if act.size == 0:
            break
        Ua = U[act]
        states = Ua[:, :, 0, :]
        ok = model.admissible(states)
        if not np.all(ok):
            s, i = (int(j) for j in np.argwhere(~ok)[0])
            raise InadmissibleStateError(
                f"sample xi={xi[act[s]]!r} left the hyperbolicity set in cell {i}",
                cell=i, state=states[s, i], kind=model.violation_kind)
        b = np.min(model.b(states), axis=1)
        lam = np.max(model.wavespeed(states), axis=1)
        dt = config.cfl * np.minimum(b * dx, dx / lam)
        if rate > 0:
            dt = np.minimum(dt, 1.0 / rate)
        remaining = t_end - t[act]
        last = dt >= remaining * (1.0 - 1e-12)
        dt = np.where(last, remaining, dt)
        Un = lax_friedrichs_update(Ua, model.flux(Ua), dt / dx)
        if rate > 0:
            Un = Un + dt[:, None, None, None] * model.source(Un)
        U[act] = Un
        t[act] = np.where(last, t_end, t[act] + dt)
    return U[:, :, 0, :]


def _chunk_stats(values):
    mean = values.mean(axis=0)
    return values.shape[0], mean, np.sum((values - mean) ** 2, axis=0)


def merge_stats(a, b):
    """Pairwise merge of ``(count, mean, sum of squared deviations)``."""
    na, ma, sa = a
    nb, mb, sb = b
    n = na + nb
    delta = mb - ma
    return n, ma + delta * (nb / n), sa + sb + delta * delta * (na * nb / n)


def thread_count():
    try:
        return max(1, int(os.environ.get(THREADS_ENV, "1")))
    except ValueError:
        return 1


def mc_run(config, samples=None, seed=None, model=None, threads=None, chunk=CHUNK):
    """Sample mean and (unbiased) standard deviation over ``samples`` deterministic solves."""
    started = time.perf_counter()
    samples = config.samples if samples is None else int(samples)
    seed = config.seed if seed is None else int(seed)
    if samples < 1:
        raise ValueError("need at least one sample")
    config = config.replace(samples=samples, seed=seed, K=0, Q=1)
    problem = setup(config, model)
    xi = sample_points(samples, seed)
    chunks = [xi[i:i + chunk] for i in range(0, samples, chunk)]
    threads = thread_count() if threads is None else max(1, int(threads))

    def work(part):
        return _chunk_stats(deterministic_solve(problem, part))

    if threads == 1:
        parts = map(work, chunks)
    else:
        pool = ThreadPoolExecutor(threads)
        parts = pool.map(work, chunks)
    stats = None
    try:
        for part in parts:
            stats = part if stats is None else merge_stats(stats, part)
    finally:
        if threads != 1:
            pool.shutdown()
    n, mean, m2 = stats
    std = np.sqrt(m2 / (n - 1)) if n > 1 else np.zeros_like(mean)
    return RunResult(
        method="mc", model=problem.model.name, K=0, grid=problem.grid, time=config.t_end,
        mean=mean, std=std, components=problem.model.components, steps=0,
        wall_time=time.perf_counter() - started, fingerprint=config.fingerprint(),
    )
