"""Command-line front end.

Subcommands: recover, qopt, gr-const, noise-bound, experiment, rl.
All data I/O uses the headerless CSV matrix convention; output files are
written atomically.  A plain key=value config file can pre-set any flag
of the chosen subcommand ('#' starts a comment); explicit command-line
flags win.  ODDS_SEED in the environment is the fallback seed.
"""

from __future__ import annotations

import argparse
import hashlib
import os
import sys

import numpy as np

from odds import gr, linalg, qopt, rl, synth
from odds.gdds import RecoveryProblem, SolverConfig, lp_oracle, solve_gdds


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        raise UsageError(message)


class UsageError(Exception):
    pass


def _default_seed() -> int:
    return int(os.environ.get("ODDS_SEED", "0"))


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="odds", description="Optimal denoising Dantzig selector toolkit")
    top.add_argument("--config", help="key=value config file; flags override it")
    sub = top.add_subparsers(dest="subcommand", required=True)

    p = sub.add_parser("recover", parents=[], help="solve a Dantzig-selector recovery problem")
    p.add_argument("--x", required=True, help="CSV path of the data matrix X")
    p.add_argument("--y", required=True, help="CSV path of the observation vector y")
    p.add_argument("--q", help="CSV path of the denoising matrix Q; default: X with normalized columns")
    p.add_argument("--lambda", dest="lam", type=float, required=True)
    p.add_argument("--tol", type=float, default=1e-7)
    p.add_argument("--max-iters", type=int, default=50_000)
    p.add_argument("--oracle", action="store_true", help="cross-check against the exact LP solve")
    p.add_argument("--out", help="output CSV for beta (default: stdout)")

    p = sub.add_parser("qopt", help="compute the optimized denoising matrix")
    p.add_argument("--input", required=True, help="CSV path of X")
    p.add_argument("--output", required=True, help="CSV path for Q")
    p.add_argument("--max-iters", type=int, default=5000)
    p.add_argument("--tol", type=float, default=None)
    p.add_argument("--seed", type=int, default=None)

    p = sub.add_parser("gr-const", help="brute-force restricted recovery constant")
    p.add_argument("--x", required=True)
    p.add_argument("--q", required=True)
    p.add_argument("--p", default="2", help="p-norm of the denominator (number or 'inf')")
    p.add_argument("--s", type=int, default=1)
    p.add_argument("--budget", type=int, default=2000)
    p.add_argument("--mode", choices=["support-restricted", "full-vector"], default="support-restricted")
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="output path for the one-line CSV record (default: stdout)")

    p = sub.add_parser("noise-bound", help="Monte-Carlo noise-bound frequencies")
    p.add_argument("--q", required=True)
    p.add_argument("--sigma", type=float, default=1.0)
    p.add_argument("--trials", type=int, default=100_000)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", help="output path for the one-line CSV record (default: stdout)")

    p = sub.add_parser("experiment", help="synthetic DS-vs-ODDS comparison sweeps")
    p.add_argument("--preset", choices=["small", "medium"], required=True)
    p.add_argument("--runs", type=int, default=10)
    p.add_argument("--seed", type=int, default=None)
    p.add_argument("--out", required=True, help="output CSV path")

    p = sub.add_parser("rl", help="corrupted-chain TD comparison")
    p.add_argument("--noise-features", type=int, choices=[300, 600], default=300)
    p.add_argument("--samples", type=int, default=200)
    p.add_argument("--gamma", type=float, default=0.9)
    p.add_argument("--seeds", type=int, default=20)
    p.add_argument("--lambda-scale", type=float, default=1.1)
    p.add_argument("--out", required=True, help="output prefix: writes <out>.csv and <out>_values.csv")
    return top


def _load_config(path: str) -> list[str]:
    """Turn key=value lines into a flag list prepended before user flags."""
    extra = []
    with open(path) as f:
        for line in f:
            line = line.split("#", 1)[0].strip()
            if not line:
                continue
            if "=" not in line:
                raise UsageError(f"bad config line: {line!r}")
            key, val = (tok.strip() for tok in line.split("=", 1))
            extra.append("--" + key.replace("_", "-"))
            if val.lower() != "true":  # bare true means a store_true flag
                extra.append(val)
    return extra


def _emit(text: str, out: str | None) -> None:
    if out:
        linalg.atomic_write_text(out, text)
    else:
        sys.stdout.write(text)


def _cmd_recover(args) -> int:
    x = linalg.load_matrix(args.x)
    y = linalg.load_vector(args.y)
    q = linalg.load_matrix(args.q) if args.q else linalg.normalize_columns(x)
    cfg = SolverConfig(max_iters=args.max_iters, primal_tol=args.tol, dual_tol=args.tol)
    sol = solve_gdds(RecoveryProblem(x=x, y=y, lam=args.lam, q=q), cfg)
    _emit("\n".join(repr(float(b)) for b in sol.beta) + "\n", args.out)
    line = (
        f"objective={sol.objective:.12g} violation={sol.constraint_violation:.3g} "
        f"iterations={sol.iterations} converged={sol.converged}"
    )
    if args.oracle:
        ref = lp_oracle(RecoveryProblem(x=x, y=y, lam=args.lam, q=q))
        line += f" oracle_objective={ref.objective:.12g} gap={abs(ref.objective - sol.objective):.3g}"
    print(line, file=sys.stderr)
    return 0


def _cmd_qopt(args) -> int:
    x = linalg.load_matrix(args.input)
    cfg = qopt.QOptConfig(max_iters=args.max_iters, grad_tol=args.tol)
    res = qopt.optimize_q(x, cfg, seed=args.seed if args.seed is not None else _default_seed())
    linalg.save_matrix(args.output, res.q)
    print(
        f"objective={res.objective:.12g} iterations={res.iterations} converged={res.converged}",
        file=sys.stderr,
    )
    return 0


def _inputs_hash(*arrays) -> str:
    h = hashlib.sha256()
    for a in arrays:
        h.update(np.ascontiguousarray(a, dtype=float).tobytes())
    return h.hexdigest()[:16]


def _cmd_gr_const(args) -> int:
    x = linalg.load_matrix(args.x)
    q = linalg.load_matrix(args.q)
    p = np.inf if args.p.lower() in ("inf", "infinity") else float(args.p)
    seed = args.seed if args.seed is not None else _default_seed()
    est = gr.estimate_gr_constant(
        gr.GrQuery(q=q, x=x, p=p, s=args.s, budget=args.budget, denominator_mode=args.mode),
        seed=seed,
    )
    rec = f"{_inputs_hash(q, x)},{est.value!r},{args.mode},{args.budget},{seed}\n"
    _emit(rec, args.out)
    return 0


def _cmd_noise_bound(args) -> int:
    q = linalg.load_matrix(args.q)
    seed = args.seed if args.seed is not None else _default_seed()
    rep = gr.noise_bound_trial(q, args.sigma, args.trials, seed=seed)
    rec = (
        f"{_inputs_hash(q)},{rep.freq_above_proof!r},{rep.freq_above_lemma!r},"
        f"{rep.proof_threshold!r},{rep.lemma_threshold!r},{args.trials},{seed}\n"
    )
    _emit(rec, args.out)
    return 0


def _cmd_experiment(args) -> int:
    seed = args.seed if args.seed is not None else _default_seed()
    if args.preset == "small":
        specs = synth.small_scale_specs(runs=args.runs, seed=seed)
    else:
        specs = synth.medium_scale_specs(runs=args.runs, seed=seed)
    _rows, csv_text = synth.run_sweep(specs)
    linalg.atomic_write_text(args.out, csv_text)
    return 0


def _cmd_rl(args) -> int:
    seed0 = _default_seed()
    mdp = rl.ChainMdp(gamma=args.gamma)
    feat_spec = rl.FeatureSpec(num_noise=args.noise_features)
    results, v_true = rl.run_rl_experiment(
        mdp=mdp,
        feat_spec=feat_spec,
        n_samples=args.samples,
        seeds=range(seed0, seed0 + args.seeds),
        lambda_scale=args.lambda_scale,
    )
    lines = ["seed,err_ds,err_odds"]
    lines += [f"{r.seed},{r.err_ds!r},{r.err_odds!r}" for r in results]
    linalg.atomic_write_text(args.out + ".csv", "\n".join(lines) + "\n")

    vlines = ["state,v_true," + ",".join(f"v_ds_{r.seed},v_odds_{r.seed}" for r in results)]
    for s in range(mdp.num_states):
        row = [str(s), repr(float(v_true[s]))]
        for r in results:
            row += [repr(float(r.v_ds[s])), repr(float(r.v_odds[s]))]
        vlines.append(",".join(row))
    linalg.atomic_write_text(args.out + "_values.csv", "\n".join(vlines) + "\n")
    return 0


_DISPATCH = {
    "recover": _cmd_recover,
    "qopt": _cmd_qopt,
    "gr-const": _cmd_gr_const,
    "noise-bound": _cmd_noise_bound,
    "experiment": _cmd_experiment,
    "rl": _cmd_rl,
}


def main(argv=None) -> int:
    argv = list(sys.argv[1:] if argv is None else argv)
    parser = build_parser()
    try:
        # splice config-provided flags in right after the subcommand token,
        # so explicit command-line flags (parsed later) override them
        if "--config" in argv:
            i = argv.index("--config")
            if i + 1 >= len(argv):
                raise UsageError("--config requires a path")
            cfg_flags = _load_config(argv[i + 1])
            argv = argv[:i] + argv[i + 2 :]
            sub_pos = next((j for j, tok in enumerate(argv) if not tok.startswith("-")), None)
            if sub_pos is None:
                raise UsageError("--config given without a subcommand")
            argv = argv[: sub_pos + 1] + cfg_flags + argv[sub_pos + 1 :]
        args = parser.parse_args(argv)
    except UsageError as exc:
        print(f"odds: {exc}", file=sys.stderr)
        return 2
    try:
        return _DISPATCH[args.subcommand](args)
    except Exception as exc:
        print(f"odds: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
