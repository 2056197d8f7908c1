"""Sod shock tube with uncertain interface position: hSG, IPMM and splitting against Monte Carlo.

Run: python3 demos/sod.py [--cells 500] [--samples 500] [--out demo_output]
"""

import argparse
from collections import Counter

from hsguq.analysis import error_l1
from hsguq.config import make_config
from hsguq.methods import run_method
from hsguq.output import write_run


def main():
    parser = argparse.ArgumentParser()
    parser.add_argument("--cells", type=int, default=500)
    parser.add_argument("--samples", type=int, default=500)
    parser.add_argument("--out", default="demo_output/sod")
    args = parser.parse_args()

    base = make_config(method="mc", initial="sod_uq", K=2, Q=100, cells=args.cells, t_end=0.14,
                       samples=args.samples)
    reference = run_method(base)
    write_run(reference, base, f"{args.out}/mc")
    for method in ("hsg", "ipmm", "split"):
        cfg = base.replace(method=method)
        res = run_method(cfg)
        write_run(res, cfg, f"{args.out}/{method}")
        kinds = Counter(e.kind for e in res.events)
        print(f"{method:>5}: {res.status:<10} L1(E[rho]) {error_l1(res, reference, 'rho'):.5f}  "
              f"L1(std[rho]) {error_l1(res, reference, 'rho', 'std'):.5f}  events {dict(kinds)}")
    print(f"outputs in {args.out}/")


if __name__ == "__main__":
    main()
