#!/usr/bin/env python3
"""Scan the scaled orthant fraction 2 (|K cap Q| / |K|)^(1/n) over random bodies.

For isotropic bodies the smallest such value across random rotated orthants
is the empirical stand-in for the best constant in the orthant lower bound;
the reference columns show 1/sqrt(n) and 1/n for comparison.

Usage: python scripts/orthant_fraction_scan.py [--dims 2 3 4] [--trials 20] [--seed 0]
"""

import argparse
import sys

from conesec.verify import experiment_alpha_n


def main() -> int:
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--dims", type=int, nargs="+", default=[2, 3, 4])
    ap.add_argument("--trials", type=int, default=20)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    print(f"{'n':>3}  {'min value':>10}  {'mean':>10}  {'1/sqrt(n)':>10}  {'1/n':>10}")
    for n in args.dims:
        out = experiment_alpha_n(n, trials=args.trials, seed=args.seed)
        mean = sum(out["values"]) / len(out["values"])
        print(f"{n:>3}  {out['min_value']:>10.6f}  {mean:>10.6f}  "
              f"{out['reference_sqrt']:>10.6f}  {out['reference_linear']:>10.6f}")
    return 0


if __name__ == "__main__":
    sys.exit(main())
