"""Post-processing: error norms against a reference, limiter usage, CFL diagnostics."""

import csv

import numpy as np

from .errors import GridMismatchError
from .gpc import point_values
from .records import LimiterRecord, RunResult

__all__ = [
    "RunResult", "error_l1", "error_linf", "limiter_summary", "cfl_diagnostic",
    "sg_jacobian", "error_table", "write_error_table", "format_number", "LimiterRecord",
]

ERROR_COLUMNS = ("method", "K", "component", "statistic", "norm", "value")


def format_number(x):
    return format(float(x), ".17g")


def _component_index(result, component):
    if isinstance(component, str):
        try:
            return result.components.index(component)
        except ValueError:
            raise KeyError(f"unknown component {component!r}; have {result.components}") from None
    return int(component)


def _difference(result, reference, component, statistic):
    g1, g2 = result.grid, reference.grid
    if (g1.cells, g1.x_left, g1.x_right) != (g2.cells, g2.x_left, g2.x_right):
        raise GridMismatchError(f"grids differ: {g1} vs {g2}")
    if statistic not in ("mean", "std"):
        raise ValueError(f"statistic must be 'mean' or 'std', got {statistic!r}")
    c = _component_index(result, component)
    h = getattr(result, statistic)[:, c]
    g = getattr(reference, statistic)[:, _component_index(reference, component)]
    return h - g


def error_l1(result, reference, component=0, statistic="mean"):
    """``sum_i dx |h(x_i) - g(x_i)|`` for one statistic of one component."""
    return float(result.grid.dx * np.sum(np.abs(_difference(result, reference, component, statistic))))


def error_linf(result, reference, component=0, statistic="mean"):
    """``max_i |h(x_i) - g(x_i)|``."""
    return float(np.max(np.abs(_difference(result, reference, component, statistic))))


def limiter_summary(record):
    """``(percent of limited cell-steps, max theta, max theta for t > 0)``."""
    if record is None or len(record) == 0:
        raise ValueError("empty limiter record")
    thetas = np.concatenate([np.ravel(th) for th in record.thetas])
    later = [np.ravel(th) for t, th in zip(record.times, record.thetas) if t > 0]
    percent = 100.0 * np.count_nonzero(thetas > 0) / thetas.size
    max_later = float(np.max(np.concatenate(later))) if later else 0.0
    return float(percent), float(np.max(thetas)), max_later


def sg_jacobian(U, model, basis, quad):
    """SG flux Jacobian per cell, ``sum_q w_q phi_j phi_k df/du(u(xi_q))``.

    Shape ``(..., d(K+1), d(K+1))`` with the coefficient index outermost.
    """
    U = np.asarray(U, dtype=float)
    V = point_values(U, basis, quad)
    J = model.jacobian(V)
    Phi = basis.vandermonde(quad)
    w = quad.effective_weights
    A = np.einsum("q,qj,qk,...qab->...jakb", w, Phi, Phi, J)
    n = U.shape[-2] * U.shape[-1]
    return A.reshape(U.shape[:-2] + (n, n))


def cfl_diagnostic(field, model, basis, quad):
    """``(pointwise wavespeed bound, spectral radius of the SG Jacobian)``, both maximised over cells.

    The second value is ``nan`` when the eigenvalue computation fails.
    """
    U = np.asarray(getattr(field, "U", field), dtype=float)
    V = point_values(U, basis, quad)
    pointwise = float(np.max(model.wavespeed(V)))
    try:
        eig = np.linalg.eigvals(sg_jacobian(U, model, basis, quad))
        radius = float(np.max(np.abs(eig)))
    except (np.linalg.LinAlgError, ValueError, FloatingPointError):
        radius = float("nan")
    return pointwise, radius


def error_table(results, reference, components=None, norms=("L1", "Linf")):
    """Rows ``(method, K, component, statistic, norm, value)`` for each result against ``reference``.

    Standard deviations are only tabulated for expansions with ``K > 0`` and
    for Monte Carlo.
    """
    funcs = {"L1": error_l1, "Linf": error_linf}
    rows = []
    for res in results:
        comps = res.components if components is None else components
        stats = ("mean", "std") if (res.K > 0 or res.method == "mc") else ("mean",)
        for comp in comps:
            for stat in stats:
                for norm in norms:
                    rows.append((res.method, res.K, comp, stat, norm, funcs[norm](res, reference, comp, stat)))
    return rows


def write_error_table(rows, path):
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh, lineterminator="\n")
        w.writerow(ERROR_COLUMNS)
        for method, K, comp, stat, norm, value in rows:
            w.writerow([method, K, comp, stat, norm, format_number(value)])


def read_error_table(path):
    with open(path, newline="") as fh:
        rows = list(csv.DictReader(fh))
    for r in rows:
        r["K"] = int(r["K"])
        r["value"] = float(r["value"])
    return rows


def limiter_rows(record):
    """``LimiterRecord`` as rows ``(step, time, cell, theta)``."""
    if record is None:
        return []
    out = []
    for n, t, th in zip(record.steps, record.times, record.thetas):
        out.extend((n, t, i, v) for i, v in enumerate(np.ravel(th)))
    return out


