#!/usr/bin/env python3
"""Medium-scale DS-vs-ODDS comparison sweep.

Runs n=500, m in {700, 900}, nnz=10, sigma=0.01 with
lambda = sigma * sqrt(2 log n) and writes the aggregate CSV.
"""

import argparse

from odds import linalg, synth


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--runs", type=int, default=10, help="trials per m (paper: 50)")
    ap.add_argument("--seed", type=int, default=0)
    ap.add_argument("--ms", type=int, nargs="+", default=[700, 900])
    ap.add_argument("--out", default="medium_scale.csv")
    args = ap.parse_args()

    specs = synth.medium_scale_specs(runs=args.runs, seed=args.seed, ms=tuple(args.ms))
    rows, csv_text = synth.run_sweep(specs)
    linalg.atomic_write_text(args.out, csv_text)
    for row in rows:
        if row["stat"] == "mean":
            print(
                f"m={row['m']}: mse_ds={row['mse_ds']:.3e} mse_odds={row['mse_odds']:.3e}"
            )
    print(f"wrote {args.out}")


if __name__ == "__main__":
    main()
