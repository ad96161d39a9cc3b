#!/usr/bin/env python3
"""Corrupted-chain TD comparison: DS-TD vs ODDS-TD.

Per-seed value-approximation errors plus the per-state value vectors,
written as <out>.csv and <out>_values.csv.
"""

import argparse

import numpy as np

from odds import linalg, rl


def main():
    ap = argparse.ArgumentParser(description=__doc__)
    ap.add_argument("--noise-features", type=int, default=300, choices=[300, 600])
    ap.add_argument("--samples", type=int, default=200)
    ap.add_argument("--gamma", type=float, default=0.9)
    ap.add_argument("--seeds", type=int, default=20)
    ap.add_argument("--lambda-scale", type=float, default=1.1)
    ap.add_argument("--out", default="rl_chain")
    args = ap.parse_args()

    mdp = rl.ChainMdp(gamma=args.gamma)
    results, v_true = rl.run_rl_experiment(
        mdp=mdp,
        feat_spec=rl.FeatureSpec(num_noise=args.noise_features),
        n_samples=args.samples,
        seeds=range(args.seeds),
        lambda_scale=args.lambda_scale,
    )
    lines = ["seed,err_ds,err_odds"]
    for r in results:
        print(f"seed {r.seed:>2}: err_ds={r.err_ds:.4f} err_odds={r.err_odds:.4f}")
        lines.append(f"{r.seed},{r.err_ds!r},{r.err_odds!r}")
    linalg.atomic_write_text(args.out + ".csv", "\n".join(lines) + "\n")

    vlines = ["state,v_true," + ",".join(f"v_ds_{r.seed},v_odds_{r.seed}" for r in results)]
    for s in range(mdp.num_states):
        row = [str(s), repr(float(v_true[s]))]
        for r in results:
            row += [repr(float(r.v_ds[s])), repr(float(r.v_odds[s]))]
        vlines.append(",".join(row))
    linalg.atomic_write_text(args.out + "_values.csv", "\n".join(vlines) + "\n")

    wins = sum(r.err_odds <= r.err_ds for r in results)
    errs_ds = np.array([r.err_ds for r in results])
    errs_odds = np.array([r.err_odds for r in results])
    print(f"ODDS-TD wins {wins}/{len(results)} seeds; "
          f"median err_ds={np.median(errs_ds):.4f} err_odds={np.median(errs_odds):.4f}")
    print(f"wrote {args.out}.csv and {args.out}_values.csv")


if __name__ == "__main__":
    main()
