"""Plane source with uncertain pulse width: classical SG fails, hSG and IPMM track Monte Carlo.

Run: python3 demos/plane_source.py [--cells 200] [--samples 500] [--out demo_output]
"""

import argparse

from hsguq.analysis import error_l1, limiter_summary
from hsguq.config import make_config
from hsguq.methods import run_method
from hsguq.output import write_run


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--cells", type=int, default=200)
    parser.add_argument("--samples", type=int, default=500)
    parser.add_argument("--out", default="demo_output/plane_source")
    args = parser.parse_args()

    base = make_config(method="mc", initial="plane_source", K=2, Q=10, cells=args.cells,
                       t_end=0.45, samples=args.samples)
    reference = run_method(base)
    write_run(reference, base, f"{args.out}/mc")
    print(f"Monte Carlo with {args.samples} samples: {reference.wall_time:.1f} s")

    for method in ("sg", "hsg", "split", "ipmm"):
        cfg = base.replace(method=method)
        res = run_method(cfg)
        write_run(res, cfg, f"{args.out}/{method}")
        line = f"{method:>5}: {res.status:<18} steps {res.steps:4d}"
        if res.completed:
            line += f"  L1(E[m0]) {error_l1(res, reference, 'm0'):.5f}  L1(std[m0]) {error_l1(res, reference, 'm0', 'std'):.5f}"
        else:
            e = res.events[-1]
            line += f"  {e.kind} at cell {e.cell}, node {e.node}"
        if res.limiter is not None:
            pct, top, later = limiter_summary(res.limiter)
            line += f"  limited {pct:.2f}% max theta {top:.3f} (t>0: {later:.4f})"
        print(line)
    print(f"outputs in {args.out}/")


if __name__ == "__main__":
    main()
