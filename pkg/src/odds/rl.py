"""Sparse temporal-difference learning on the corrupted chain.

A chain-walk MDP with absorbing goal states at both ends, features mixing
a constant, a few RBFs, and many pure-noise coordinates, and the
Dantzig-selector TD solvers: the baseline uses the feature matrix itself
as the denoising matrix (q_mode="ds"); the optimized variant computes the
denoising matrix from A = Phi - gamma * Phi' (q_mode="odds").
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from odds.gdds import RecoveryProblem, Solution, SolverConfig, solve_gdds
from odds.linalg import check_matrix, check_vector, make_rng
from odds.qopt import QOptConfig, optimize_q


@dataclass(frozen=True)
class ChainMdp:
    num_states: int = 20
    goal_states: tuple = (0, 19)  # 0-based ends of the chain
    goal_reward: float = 1.0
    move_prob: float = 0.9
    gamma: float = 0.9

    def __post_init__(self):
        if not (0.0 < self.move_prob <= 1.0):
            raise ValueError("move_prob must be in (0, 1]")
        if not (0.0 <= self.gamma < 1.0):
            raise ValueError("gamma must be in [0, 1)")
        if len(self.goal_states) != 2 or not all(
            0 <= g < self.num_states for g in self.goal_states
        ):
            raise ValueError("goal_states must be two in-range indices")


@dataclass(frozen=True)
class FeatureSpec:
    num_rbf: int = 5
    rbf_width: float | None = None  # default (num_states - 1) / (num_rbf + 1)
    num_noise: int = 300
    noise_sigma: float = 1.0
    include_constant: bool = True

    @property
    def dim(self) -> int:
        return int(self.include_constant) + self.num_rbf + self.num_noise


@dataclass(frozen=True)
class SampleSet:
    states: np.ndarray
    next_states: np.ndarray
    rewards: np.ndarray
    phi: np.ndarray
    phi_next: np.ndarray

    def __post_init__(self):
        n = self.states.size
        if not (self.next_states.size == self.rewards.size == n == self.phi.shape[0] == self.phi_next.shape[0]):
            raise ValueError("sample arrays must have matching row counts")
        if not np.all(np.isfinite(self.rewards)):
            raise ValueError("rewards must be finite")


@dataclass(frozen=True)
class TdProblem:
    a_mat: np.ndarray
    b_vec: np.ndarray
    q: np.ndarray
    lam: float

    def __post_init__(self):
        check_matrix(self.a_mat, "A")
        check_matrix(self.q, "Q")
        check_vector(self.b_vec, "b")
        if self.lam < 0:
            raise ValueError("lambda must be non-negative")


def build_chain_mdp(spec: ChainMdp, policy: str = "walk"):
    """Transition matrix and expected one-step reward for the fixed chain policy.

    From each non-goal state the walker moves one step toward the nearest
    goal with probability move_prob and one step away otherwise (clamped
    at the chain ends).  Goals are absorbing; entering a goal from a
    non-goal state pays goal_reward, the goal self-loop pays nothing.
    """
    if policy != "walk":
        raise ValueError(f"unknown policy {policy!r}")
    ns = spec.num_states
    goals = set(spec.goal_states)
    p = np.zeros((ns, ns))
    r = np.zeros(ns)
    for s in range(ns):
        if s in goals:
            p[s, s] = 1.0
            continue
        nearest = min(spec.goal_states, key=lambda g: (abs(g - s), g))
        toward = s + (1 if nearest > s else -1)
        away = s - (1 if nearest > s else -1)
        away = min(max(away, 0), ns - 1)
        p[s, toward] += spec.move_prob
        p[s, away] += 1.0 - spec.move_prob
        for nxt, prob in ((toward, spec.move_prob), (away, 1.0 - spec.move_prob)):
            if nxt in goals:
                r[s] += prob * spec.goal_reward
    return p, r


def transition_reward(spec: ChainMdp, s: int, s_next: int) -> float:
    return spec.goal_reward if (s_next in spec.goal_states and s not in spec.goal_states) else 0.0


def exact_value_function(p: np.ndarray, r: np.ndarray, gamma: float) -> np.ndarray:
    """Solve (I - gamma P) V = R by dense LU."""
    p = check_matrix(p, "P")
    if not (0.0 <= gamma < 1.0):
        raise ValueError("gamma must be in [0, 1)")
    v = np.linalg.solve(np.eye(p.shape[0]) - gamma * p, np.asarray(r, dtype=float))
    resid = np.max(np.abs((np.eye(p.shape[0]) - gamma * p) @ v - r))
    if resid > 1e-10:
        raise FloatingPointError(f"Bellman residual {resid} too large")
    return v


def build_features(spec: FeatureSpec, num_states: int, seed=0) -> np.ndarray:
    """State-feature matrix: [constant, RBFs, per-state Gaussian noise columns]."""
    rng = make_rng(seed)
    pos = np.arange(1, num_states + 1, dtype=float)
    cols = []
    if spec.include_constant:
        cols.append(np.ones(num_states))
    if spec.num_rbf > 0:
        centers = np.linspace(1.0, num_states, spec.num_rbf)
        width = spec.rbf_width if spec.rbf_width is not None else (num_states - 1) / (spec.num_rbf + 1)
        for c in centers:
            cols.append(np.exp(-((pos - c) ** 2) / (2.0 * width**2)))
    if spec.num_noise > 0:
        cols.extend(spec.noise_sigma * rng.standard_normal((spec.num_noise, num_states)))
    return np.column_stack(cols)


def collect_samples(mdp: ChainMdp, feat: np.ndarray, n: int, seed=0) -> SampleSet:
    """Off-policy samples: states uniform over the state space, successors from P."""
    if n < 1:
        raise ValueError("n must be >= 1")
    feat = check_matrix(feat, "features")
    p, _ = build_chain_mdp(mdp)
    rng = make_rng(seed)
    states = rng.integers(0, mdp.num_states, size=n)
    next_states = np.array(
        [rng.choice(mdp.num_states, p=p[s]) for s in states], dtype=int
    )
    rewards = np.array([transition_reward(mdp, s, sn) for s, sn in zip(states, next_states)])
    return SampleSet(
        states=states,
        next_states=next_states,
        rewards=rewards,
        phi=feat[states],
        phi_next=feat[next_states],
    )


def least_squares_lambda(a_mat, b_vec, q, scale: float = 1.1) -> float:
    """Scale-aware default: scale * ||Q^T (A theta_ls - b)||_inf at the least-squares theta."""
    theta_ls, *_ = np.linalg.lstsq(a_mat, b_vec, rcond=None)
    return float(scale * np.max(np.abs(q.T @ (a_mat @ theta_ls - b_vec))))


def assemble_td_problem(
    samples: SampleSet,
    gamma: float,
    lam: float | None = None,
    q_mode: str = "odds",
    qopt_config: QOptConfig = QOptConfig(max_iters=2000, grad_tol=None),
    seed=0,
    lambda_scale: float = 1.1,
) -> TdProblem:
    """Build the (A, b, Q) system; lam=None picks the least-squares-residual default."""
    a_mat = samples.phi - gamma * samples.phi_next
    b_vec = samples.rewards
    if q_mode == "ds":
        q = samples.phi
    elif q_mode == "odds":
        q = optimize_q(a_mat, qopt_config, seed=seed).q
    else:
        raise ValueError(f"unknown q_mode {q_mode!r}")
    if lam is None:
        lam = least_squares_lambda(a_mat, b_vec, q, scale=lambda_scale)
    return TdProblem(a_mat=a_mat, b_vec=b_vec, q=q, lam=float(lam))


def solve_td(problem: TdProblem, config: SolverConfig = SolverConfig()) -> Solution:
    """Sparse TD solve: min ||theta||_1 s.t. ||Q^T (A theta - b)||_inf <= lam."""
    return solve_gdds(
        RecoveryProblem(x=problem.a_mat, y=problem.b_vec, lam=problem.lam, q=problem.q),
        config,
    )


def value_error(theta, feat, v_true, weights) -> float:
    """Weighted value-approximation error sqrt(sum_i w_i (phi_i^T theta - V_i)^2)."""
    theta = check_vector(theta, "theta")
    feat = check_matrix(feat, "features")
    v_true = check_vector(v_true, "v_true")
    weights = np.asarray(weights, dtype=float).ravel()
    if np.any(weights < 0):
        raise ValueError("weights must be non-negative")
    diff = feat @ theta - v_true
    return float(np.sqrt(np.sum(weights * diff * diff)))


@dataclass(frozen=True)
class RlSeedResult:
    seed: int
    err_ds: float
    err_odds: float
    v_ds: np.ndarray = field(compare=False, repr=False, default=None)
    v_odds: np.ndarray = field(compare=False, repr=False, default=None)


def run_rl_experiment(
    mdp: ChainMdp = ChainMdp(),
    feat_spec: FeatureSpec = FeatureSpec(),
    n_samples: int = 200,
    seeds=range(20),
    lambda_scale: float = 1.1,
    solver: SolverConfig = SolverConfig(max_iters=30000, primal_tol=1e-5, dual_tol=1e-5),
    qopt_config: QOptConfig = QOptConfig(max_iters=1500, grad_tol=None),
):
    """Per-seed DS-TD vs optimized-Q TD comparison on the corrupted chain.

    Returns (results, v_true): uniform-weighted value errors per seed plus
    the approximated value vectors for plotting.
    """
    p, r = build_chain_mdp(mdp)
    v_true = exact_value_function(p, r, mdp.gamma)
    weights = np.full(mdp.num_states, 1.0 / mdp.num_states)

    results = []
    for seed in seeds:
        feat = build_features(feat_spec, mdp.num_states, seed=seed)
        samples = collect_samples(mdp, feat, n_samples, seed=seed + 1_000_003)
        errs = {}
        values = {}
        for mode in ("ds", "odds"):
            prob = assemble_td_problem(
                samples, mdp.gamma, lam=None, q_mode=mode,
                qopt_config=qopt_config, seed=seed, lambda_scale=lambda_scale,
            )
            theta = solve_td(prob, solver).beta
            errs[mode] = value_error(theta, feat, v_true, weights)
            values[mode] = feat @ theta
        results.append(
            RlSeedResult(seed=seed, err_ds=errs["ds"], err_odds=errs["odds"],
                         v_ds=values["ds"], v_odds=values["odds"])
        )
    return results, v_true
