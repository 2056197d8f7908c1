"""CSV and plot-script writers for run results."""

import csv
from pathlib import Path

import numpy as np

from .analysis import format_number, limiter_rows


def _writer(fh):
    return csv.writer(fh, lineterminator="\n")


def write_solution(result, path):
    """Columns ``x``, then ``mean_<c>, std_<c>`` for every component."""
    header = ["x"]
    for c in result.components:
        header += [f"mean_{c}", f"std_{c}"]
    cols = [result.grid.centers]
    for j in range(len(result.components)):
        cols += [result.mean[:, j], result.std[:, j]]
    data = np.column_stack(cols)
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(header)
        for row in data:
            w.writerow([format_number(v) for v in row])


def read_solution(path):
    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    return rows[0], np.array(rows[1:], dtype=float)


def write_limiter(record, path):
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["step", "time", "cell", "theta"])
        for n, t, i, th in limiter_rows(record):
            w.writerow([n, format_number(t), i, format_number(th)])


def write_events(events, path):
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["step", "time", "cell", "node", "kind", "detail"])
        for e in events:
            w.writerow([e.step, format_number(e.time), e.cell, e.node, e.kind, e.detail])


def write_meta(result, config, path):
    with open(path, "w", newline="") as fh:
        w = _writer(fh)
        w.writerow(["key", "value"])
        for key, value in config.items():
            if isinstance(value, tuple):
                value = " ".join(format_number(v) for v in value)
            w.writerow([key, "" if value is None else value])
        w.writerow(["status", result.status])
        w.writerow(["final_time", format_number(result.time)])
        w.writerow(["steps", result.steps])
        w.writerow(["wall_time", format_number(result.wall_time)])
        w.writerow(["fingerprint", result.fingerprint])
        if result.message:
            w.writerow(["message", result.message])


def write_plot_script(result, path, solution="solution.csv"):
    """Generic gnuplot script: one panel per component and statistic."""
    lines = ["set datafile separator ','", "set key autotitle columnhead", "set xlabel 'x'",
             f"set multiplot layout {len(result.components)},2"]
    for j, c in enumerate(result.components):
        lines.append(f"set title 'E[{c}]'")
        lines.append(f"plot '{solution}' using 1:{2 + 2 * j} with lines")
        lines.append(f"set title 'std[{c}]'")
        lines.append(f"plot '{solution}' using 1:{3 + 2 * j} with lines")
    lines.append("unset multiplot")
    Path(path).write_text("\n".join(lines) + "\n")


def write_run(result, config, out_dir):
    """Write every output file of a run into ``out_dir``; returns the directory."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    write_solution(result, out / "solution.csv")
    if result.limiter is not None:
        write_limiter(result.limiter, out / "limiter.csv")
    write_events(result.events, out / "events.csv")
    write_meta(result, config, out / "meta.csv")
    write_plot_script(result, out / "plot.gp")
    return out
