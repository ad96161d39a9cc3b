"""Generalized denoising Dantzig selector.

Solves  min ||beta||_1  s.t.  ||Q^T (X beta - y)||_inf <= lambda
by linearized ADMM on the splitting z = W beta - c with W = Q^T X and
c = Q^T y; the beta step is a soft-threshold, the z step a box
projection.  The standard Dantzig selector is the special case Q = X.
A dense LP reformulation solved exactly serves as a small-scale oracle.
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np
from scipy.optimize import linprog

from odds.linalg import check_matrix, check_vector, spectral_norm_upper


class InfeasibleError(RuntimeError):
    """The LP reformulation has no feasible point."""


@dataclass(frozen=True)
class RecoveryProblem:
    x: np.ndarray
    y: np.ndarray
    lam: float
    q: np.ndarray

    def __post_init__(self):
        x = check_matrix(self.x, "X")
        q = check_matrix(self.q, "Q")
        y = check_vector(self.y, "y")
        if q.shape != x.shape:
            raise ValueError(f"Q shape {q.shape} must match X shape {x.shape}")
        if y.size != x.shape[0]:
            raise ValueError("y length must equal the number of rows of X")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")
        object.__setattr__(self, "x", x)
        object.__setattr__(self, "q", q)
        object.__setattr__(self, "y", y)


@dataclass(frozen=True)
class SolverConfig:
    max_iters: int = 50_000
    primal_tol: float = 1e-7
    dual_tol: float = 1e-7
    penalty: float = 1.0

    def __post_init__(self):
        if min(self.primal_tol, self.dual_tol, self.penalty) <= 0:
            raise ValueError("tolerances and penalty must be positive")
        if self.max_iters < 1:
            raise ValueError("max_iters must be >= 1")


@dataclass(frozen=True)
class Solution:
    beta: np.ndarray
    objective: float
    constraint_violation: float
    iterations: int
    converged: bool
    diagnostics: dict = field(default_factory=dict, compare=False)


def soft_threshold(v: np.ndarray, t: float) -> np.ndarray:
    """Componentwise sign(v) * max(|v| - t, 0)."""
    if t < 0:
        raise ValueError("threshold must be non-negative")
    v = np.asarray(v, dtype=float)
    return np.sign(v) * np.maximum(np.abs(v) - t, 0.0)


def project_linf_ball(z: np.ndarray, r: float) -> np.ndarray:
    """Componentwise clamp to [-r, r]."""
    if r < 0:
        raise ValueError("radius must be non-negative")
    return np.clip(np.asarray(z, dtype=float), -r, r)


def _violation(w, c, beta, lam):
    return float(max(0.0, np.max(np.abs(w @ beta - c)) - lam))


def _polish(w, c, lam, beta, u):
    """Active-set polish of an ADMM iterate.

    Guesses the support from beta and the active constraints from the
    dual variable u (falling back to constraint slacks), solves the
    resulting linear system in a least-squares sense, and returns the
    best candidate that is essentially feasible and no worse in l1
    objective.  A wrong guess is harmless: the candidate is rejected and
    the ADMM iterate kept.
    """
    resid = w @ beta - c
    slack = lam - np.abs(resid)
    obj = float(np.sum(np.abs(beta)))
    best = None  # (cand, objective, certgap)
    beta_scale = max(np.max(np.abs(beta)), 1e-300)
    u_scale = max(np.max(np.abs(u)), 1e-300)
    actives = [np.abs(u) > tol * u_scale for tol in (1e-4, 1e-8)]
    actives.append(slack <= 1e-4 * max(lam, 1.0))
    for sup_tol in (1e-4, 1e-6, 1e-8):
        support = np.abs(beta) > sup_tol * beta_scale
        if not np.any(support):
            continue
        for active in actives:
            if not np.any(active) or int(np.sum(active)) < int(np.sum(support)):
                continue
            wa = w[np.ix_(active, support)]
            target = c[active] + lam * np.sign(resid[active])
            sol, *_ = np.linalg.lstsq(wa, target, rcond=None)
            cand = np.zeros_like(beta)
            cand[support] = sol
            if _violation(w, c, cand, lam) > 1e-9:
                continue
            o = float(np.sum(np.abs(cand)))
            # dual certificate from the same guess: a multiplier supported on
            # the active set with W^T nu = sign(beta) on the support
            nu_a, *_ = np.linalg.lstsq(wa.T, -np.sign(cand[support]), rcond=None)
            nu = np.zeros_like(u)
            nu[active] = nu_a
            certgap = o - _dual_objective(w, c, lam, nu)
            if best is None or (certgap, o) < (best[2], best[1]):
                best = (cand, o, certgap)
    if best is None:
        return None, np.inf
    cand, o, certgap = best
    # without a tight certificate, only accept a candidate that does not
    # worsen the (feasible-side) objective
    if certgap > 1e-7 * max(1.0, o) and o > obj + 1e-7:
        return None, certgap
    return cand, certgap


def _dual_objective(w, c, lam, nu):
    """LP dual value of a (feasible-scaled) multiplier estimate.

    The dual of min ||beta||_1 s.t. ||W beta - c||_inf <= lam is
    max -c^T nu - lam ||nu||_1 over ||W^T nu||_inf <= 1; any feasible nu
    lower-bounds the primal optimum, giving a duality-gap certificate.
    """
    s = np.max(np.abs(w.T @ nu))
    if s > 1.0:
        nu = nu / s
    val = -float(c @ nu) - lam * float(np.sum(np.abs(nu)))
    return max(val, 0.0)  # beta = 0 always gives objective >= 0


def solve_gdds(problem: RecoveryProblem, config: SolverConfig = SolverConfig()) -> Solution:
    """Linearized ADMM for the generalized denoising Dantzig selector."""
    w = problem.q.T @ problem.x
    c = problem.q.T @ problem.y
    lam = float(problem.lam)
    m = w.shape[1]

    rho = config.penalty
    alpha = 1.8  # over-relaxation
    sw = spectral_norm_upper(w)
    tau_base = 1.01 * max(sw * sw, 1e-12)  # per-unit-rho linearization constant

    beta = np.zeros(m)
    z = project_linf_ball(-c, lam)
    u = np.zeros(m)  # scaled dual

    converged = False
    iters = 0
    check_every = 10
    for k in range(1, config.max_iters + 1):
        iters = k
        tau = tau_base * rho
        g = w.T @ (w @ beta - c - z + u)
        beta_old = beta
        beta = soft_threshold(beta - (rho / tau) * g, 1.0 / tau)
        wb = w @ beta
        z_old = z
        relaxed = alpha * (wb - c) + (1.0 - alpha) * z  # over-relaxation
        z = project_linf_ball(relaxed + u, lam)
        u = u + relaxed - z
        r_primal = wb - c - z

        if not np.all(np.isfinite(beta)):
            raise FloatingPointError("ADMM iterates diverged to non-finite values")

        if k % check_every == 0 or k == config.max_iters:
            pr = float(np.max(np.abs(r_primal)))
            # stationarity residual of the linearized beta step includes the
            # beta movement; the z term alone is vacuous when lam = 0
            dr_z = float(rho * np.max(np.abs(w.T @ (z - z_old))))
            dr = max(dr_z, float(tau * np.max(np.abs(beta - beta_old))))
            if pr <= config.primal_tol and dr <= config.dual_tol:
                converged = True
                break
            # certified early exit: polish the iterate and accept it when the
            # complementary-slackness dual estimate closes the duality gap
            if k % 500 == 0 and pr <= 1e-3:
                cand, certgap = _polish(w, c, lam, beta, u)
                if cand is not None and certgap <= 1e-9 * max(1.0, float(np.sum(np.abs(cand)))):
                    beta = cand
                    converged = True
                    break

    if not converged:
        polished, _ = _polish(w, c, lam, beta, u)
        if polished is not None:
            beta = polished
            converged = _violation(w, c, beta, lam) <= config.primal_tol
    beta = np.where(np.abs(beta) < 1e-14, 0.0, beta)
    return Solution(
        beta=beta,
        objective=float(np.sum(np.abs(beta))),
        constraint_violation=_violation(w, c, beta, lam),
        iterations=iters,
        converged=converged,
        diagnostics={"penalty_final": rho},
    )


def solve_ds(x: np.ndarray, y: np.ndarray, lam: float, config: SolverConfig = SolverConfig()) -> Solution:
    """Standard Dantzig selector: the Q = X special case."""
    return solve_gdds(RecoveryProblem(x=x, y=y, lam=lam, q=x), config)


def lp_oracle(problem: RecoveryProblem, max_m: int = 200) -> Solution:
    """Exact LP solve of the Dantzig selector reformulation.

    Variables beta = u - v with u, v >= 0; minimize sum(u + v) subject to
    -lam <= W (u - v) - c <= lam.  Solved by a dense simplex method so the
    result is a vertex solution, usable as an independent optimality
    oracle for the ADMM path.
    """
    w = problem.q.T @ problem.x
    c = problem.q.T @ problem.y
    lam = float(problem.lam)
    m = w.shape[1]
    if m > max_m:
        raise ValueError(f"lp_oracle guard: m = {m} exceeds {max_m}")

    a_ub = np.block([[w, -w], [-w, w]])
    b_ub = np.concatenate([lam + c, lam - c])
    res = linprog(
        c=np.ones(2 * m),
        A_ub=a_ub,
        b_ub=b_ub,
        bounds=(0, None),
        method="highs-ds",
    )
    if res.status == 2:
        raise InfeasibleError("Dantzig selector LP is infeasible")
    if not res.success:
        raise RuntimeError(f"LP oracle failed: {res.message}")
    beta = res.x[:m] - res.x[m:]
    return Solution(
        beta=beta,
        objective=float(np.sum(np.abs(beta))),
        constraint_violation=_violation(w, c, beta, lam),
        iterations=int(res.nit),
        converged=True,
    )
