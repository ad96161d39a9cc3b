"""Synthetic sparse-recovery experiments comparing the standard Dantzig
selector (denoising matrix X) against the optimized denoising matrix.

The model is y = X beta_star + eps with unit-column Gaussian X, a sparse
Gaussian-amplitude beta_star, and eps ~ N(0, sigma^2 I).  Trials are pure
functions of (seed, trial_index) so sweep output is byte-reproducible.
"""

from __future__ import annotations

import io
from dataclasses import dataclass

import numpy as np

from odds.gdds import RecoveryProblem, SolverConfig, solve_gdds
from odds.linalg import make_rng, normalize_columns
from odds.qopt import QOptConfig, optimize_q

LAMBDA_RULES = ("noise-oracle", "sigma-sqrt-2logn", "fixed")


@dataclass(frozen=True)
class SynthSpec:
    n: int
    m: int
    nnz: int
    sigma: float
    lambda_rule: str = "noise-oracle"  # or "sigma-sqrt-2logn" or "fixed:<value>"
    runs: int = 10
    seed: int = 0

    def __post_init__(self):
        if not (0 <= self.nnz <= self.m):
            raise ValueError("nnz must be in [0, m]")
        if self.runs < 1:
            raise ValueError("runs must be >= 1")
        if self.sigma < 0:
            raise ValueError("sigma must be non-negative")
        rule = self.lambda_rule.split(":")[0]
        if rule not in LAMBDA_RULES:
            raise ValueError(f"unknown lambda_rule {self.lambda_rule!r}")

    def fixed_lambda(self) -> float:
        if not self.lambda_rule.startswith("fixed"):
            raise ValueError("lambda_rule is not fixed")
        return float(self.lambda_rule.split(":", 1)[1])


@dataclass(frozen=True)
class TrialResult:
    err_ds: float
    err_odds: float
    mse_ds: float
    mse_odds: float
    seed_used: tuple


def generate_problem(spec: SynthSpec, trial_index: int):
    """Return (x, beta_star, y, eps) for one trial, deterministic in (seed, trial_index)."""
    rng = make_rng(spec.seed, trial_index)
    x = normalize_columns(rng.standard_normal((spec.n, spec.m)))
    beta_star = np.zeros(spec.m)
    if spec.nnz > 0:
        support = rng.choice(spec.m, size=spec.nnz, replace=False)
        beta_star[support] = rng.standard_normal(spec.nnz)
    eps = spec.sigma * rng.standard_normal(spec.n)
    y = x @ beta_star + eps
    return x, beta_star, y, eps


def _lambda_for(spec: SynthSpec, q: np.ndarray, eps: np.ndarray) -> float:
    rule = spec.lambda_rule.split(":")[0]
    if rule == "noise-oracle":
        return float(np.max(np.abs(q.T @ eps)))
    if rule == "sigma-sqrt-2logn":
        return float(spec.sigma * np.sqrt(2.0 * np.log(spec.n)))
    return spec.fixed_lambda()


def run_trial(
    spec: SynthSpec,
    trial_index: int,
    solver: SolverConfig = SolverConfig(),
    qopt: QOptConfig = QOptConfig(),
) -> TrialResult:
    """One DS-vs-optimized-Q comparison on a freshly generated problem."""
    x, beta_star, y, eps = generate_problem(spec, trial_index)

    q_ds = x
    q_odds = optimize_q(x, qopt, seed=spec.seed).q

    results = {}
    for tag, q in (("ds", q_ds), ("odds", q_odds)):
        lam = _lambda_for(spec, q, eps)
        sol = solve_gdds(RecoveryProblem(x=x, y=y, lam=lam, q=q), solver)
        err = float(np.linalg.norm(sol.beta - beta_star))
        results[tag] = (err, err * err / spec.m)

    return TrialResult(
        err_ds=results["ds"][0],
        err_odds=results["odds"][0],
        mse_ds=results["ds"][1],
        mse_odds=results["odds"][1],
        seed_used=(spec.seed, trial_index),
    )


def run_sweep(
    specs,
    solver: SolverConfig = SolverConfig(),
    qopt: QOptConfig = QOptConfig(),
):
    """Run all trials for each spec and aggregate mean/std rows.

    Returns (rows, csv_text).  A trial that raises is recorded as a NaN
    marker and excluded from the aggregates; the sweep itself completes.
    """
    if not specs:
        raise ValueError("specs must be non-empty")
    rows = []
    for spec in specs:
        trials = []
        failures = 0
        for t in range(spec.runs):
            try:
                trials.append(run_trial(spec, t, solver, qopt))
            except Exception:
                failures += 1
        cols = ["err_ds", "err_odds", "mse_ds", "mse_odds"]
        if trials:
            data = np.array([[getattr(tr, c) for c in cols] for tr in trials])
            mean = data.mean(axis=0)
            std = data.std(axis=0)
        else:
            mean = std = np.full(len(cols), np.nan)
        for stat, vals in (("mean", mean), ("std", std)):
            rows.append(
                {
                    "n": spec.n,
                    "m": spec.m,
                    "nnz": spec.nnz,
                    "sigma": spec.sigma,
                    "lambda_rule": spec.lambda_rule,
                    "stat": stat,
                    "err_ds": vals[0],
                    "err_odds": vals[1],
                    "mse_ds": vals[2],
                    "mse_odds": vals[3],
                    "failures": failures,
                }
            )
    return rows, sweep_csv(rows)


def sweep_csv(rows) -> str:
    cols = ["n", "m", "nnz", "sigma", "lambda_rule", "stat", "err_ds", "err_odds", "mse_ds", "mse_odds", "failures"]
    buf = io.StringIO()
    buf.write(",".join(cols) + "\n")
    for row in rows:
        buf.write(",".join(repr(row[c]) if isinstance(row[c], float) else str(row[c]) for c in cols) + "\n")
    return buf.getvalue()


def small_scale_specs(runs: int = 10, seed: int = 0):
    """Grid of the small comparison study: n=100, m=150, varying sparsity and noise."""
    return [
        SynthSpec(n=100, m=150, nnz=nnz, sigma=sigma, lambda_rule="noise-oracle", runs=runs, seed=seed)
        for sigma in (0.1, 0.2, 0.3)
        for nnz in (10, 15, 20, 25)
    ]


def medium_scale_specs(runs: int = 10, seed: int = 0, ms=(700, 900)):
    """Medium comparison study: n=500, nnz=10, sigma=0.01, lambda = sigma sqrt(2 log n)."""
    return [
        SynthSpec(n=500, m=m, nnz=10, sigma=0.01, lambda_rule="sigma-sqrt-2logn", runs=runs, seed=seed)
        for m in ms
    ]
