"""Command-line driver.

    hsguq run CONFIG [--out DIR]
    hsguq compare CONFIG... --reference CONFIG --out DIR
    hsguq tabulate-closure --n N --out PATH

Exit status: 0 completed, 3 hyperbolicity loss, 4 Newton failure (IPMM),
1 any other error.  Failures also print one JSON line on standard error.
"""

import argparse
import json
import sys
from pathlib import Path

from .analysis import error_table, write_error_table
from .config import parse_config
from .errors import ConfigError, ConvergenceError, GridMismatchError, InadmissibleStateError
from .methods import run_method
from .methods.ipmm import NEWTON_FAILURE
from .models import build_closure_table
from .output import write_run

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_HYPERBOLICITY_LOSS = 3
EXIT_NEWTON_FAILURE = 4

_STATUS_CODES = {"completed": EXIT_OK, "hyperbolicity_loss": EXIT_HYPERBOLICITY_LOSS,
                 NEWTON_FAILURE: EXIT_NEWTON_FAILURE}


def _report(kind, message, **extra):
    print(json.dumps({"error": kind, "message": message, **extra}), file=sys.stderr)


def cmd_run(args):
    config = parse_config(args.config)
    out = Path(args.out or config.output_dir)
    result = run_method(config)
    write_run(result, config, out)
    code = _STATUS_CODES.get(result.status, EXIT_ERROR)
    if code:
        last = result.events[-1] if result.events else None
        _report(result.status, result.message, step=getattr(last, "step", None),
                cell=getattr(last, "cell", None), node=getattr(last, "node", None))
    else:
        print(f"{config.method} {config.model} K={config.K}: t={result.time:.6g} "
              f"in {result.steps} steps -> {out}")
    return code


def cmd_compare(args):
    reference_cfg = parse_config(args.reference)
    configs = [parse_config(p) for p in args.configs]
    for path, cfg in zip(args.configs, configs):
        same = (cfg.model, cfg.cells, cfg.x_left, cfg.x_right, cfg.t_end) == (
            reference_cfg.model, reference_cfg.cells, reference_cfg.x_left, reference_cfg.x_right,
            reference_cfg.t_end)
        if not same:
            raise GridMismatchError(f"{path}: model, grid or t_end differ from the reference")
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    reference = run_method(reference_cfg)
    write_run(reference, reference_cfg, out / "reference")
    results = []
    code = EXIT_OK
    for n, cfg in enumerate(configs):
        res = run_method(cfg)
        write_run(res, cfg, out / f"run{n}_{cfg.method}_K{cfg.K}")
        if not res.completed:
            _report(res.status, f"{args.configs[n]}: {res.message}")
            code = _STATUS_CODES.get(res.status, EXIT_ERROR)
            continue
        results.append(res)
    write_error_table(error_table(results, reference), out / "errors.csv")
    print(f"error table for {len(results)} runs -> {out / 'errors.csv'}")
    return code


def cmd_tabulate(args):
    table = build_closure_table(args.n)
    Path(args.out).parent.mkdir(parents=True, exist_ok=True)
    table.to_csv(args.out)
    print(f"closure table with {table.size} rows -> {args.out}")
    return EXIT_OK


def build_parser():
    parser = argparse.ArgumentParser(prog="hsguq", description="Uncertainty quantification for 1D hyperbolic systems")
    sub = parser.add_subparsers(dest="command", required=True)
    p = sub.add_parser("run", help="run one configuration")
    p.add_argument("config")
    p.add_argument("--out", help="output directory (default: output_dir from the config)")
    p.set_defaults(func=cmd_run)
    p = sub.add_parser("compare", help="error table of several runs against a reference run")
    p.add_argument("configs", nargs="+")
    p.add_argument("--reference", required=True)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_compare)
    p = sub.add_parser("tabulate-closure", help="write the M1 closure table as CSV")
    p.add_argument("--n", type=int, default=2001)
    p.add_argument("--out", required=True)
    p.set_defaults(func=cmd_tabulate)
    return parser


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except InadmissibleStateError as exc:
        _report(exc.kind, str(exc), cell=exc.cell, node=exc.node)
        return EXIT_HYPERBOLICITY_LOSS
    except (ConfigError, GridMismatchError, ConvergenceError, ValueError, OSError) as exc:
        _report(type(exc).__name__, str(exc))
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
